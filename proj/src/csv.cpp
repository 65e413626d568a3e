#include "mh/csv.hpp"

#include <istream>

namespace mh::csv {

std::string encode_field(std::string_view field) {
    bool needs_quotes = field.find_first_of(",\"\r\n") != std::string_view::npos;
    if (!needs_quotes)
        return std::string(field);
    std::string out;
    out.reserve(field.size() + 2);
    out.push_back('"');
    for (char c : field) {
        if (c == '"')
            out.push_back('"');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

std::string encode_row(const std::vector<std::string>& fields) {
    std::string out;
    for (size_t i = 0; i < fields.size(); ++i) {
        if (i)
            out.push_back(',');
        out += encode_field(fields[i]);
    }
    return out;
}

bool read_row(std::istream& in, std::vector<std::string>& out) {
    out.clear();
    int c = in.get();
    if (c == EOF)
        return false;

    std::string field;
    bool in_quotes = false;
    bool any = false;
    for (;;) {
        if (c == EOF) {
            out.push_back(field);
            return true;
        }
        any = true;
        if (in_quotes) {
            if (c == '"') {
                int next = in.peek();
                if (next == '"') {
                    in.get();
                    field.push_back('"');
                } else {
                    in_quotes = false;
                }
            } else {
                field.push_back(static_cast<char>(c));
            }
        } else if (c == '"' && field.empty()) {
            in_quotes = true;
        } else if (c == ',') {
            out.push_back(std::move(field));
            field.clear();
        } else if (c == '\r') {
            if (in.peek() == '\n')
                in.get();
            out.push_back(field);
            return true;
        } else if (c == '\n') {
            out.push_back(field);
            return true;
        } else {
            field.push_back(static_cast<char>(c));
        }
        c = in.get();
    }
    (void)any;
}

} // namespace mh::csv
