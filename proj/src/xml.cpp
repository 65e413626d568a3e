#include "mh/xml.hpp"

#include <cctype>

namespace mh::xml {

namespace {

bool is_ws(char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r';
}

bool is_name_start(char c) {
    return std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == ':';
}

bool is_name_char(char c) {
    return is_name_start(c) || std::isdigit(static_cast<unsigned char>(c)) || c == '-' || c == '.';
}

} // namespace

PullParser::PullParser(std::string_view input) : in_(input) {}

void PullParser::fail(size_t offset, const std::string& message) const {
    throw ParseError(offset, message);
}

std::string_view PullParser::local_name() const {
    size_t colon = name_.rfind(':');
    if (colon == std::string::npos)
        return name_;
    return std::string_view(name_).substr(colon + 1);
}

std::string_view PullParser::attribute(std::string_view local) const {
    for (const auto& a : attrs_) {
        std::string_view n = a.name;
        size_t colon = n.rfind(':');
        if (colon != std::string_view::npos)
            n = n.substr(colon + 1);
        if (n == local)
            return a.value;
    }
    return {};
}

Token PullParser::next() {
    if (pending_end_) {
        pending_end_ = false;
        // name_ still holds the element name from the self-closing start tag.
        if (!open_.empty())
            open_.pop_back();
        return Token::EndElement;
    }
    for (;;) {
        if (pos_ >= in_.size()) {
            if (!open_.empty())
                fail(pos_, "unexpected end of input, <" + open_.back() + "> not closed");
            done_ = true;
            token_offset_ = pos_;
            return Token::End;
        }
        if (in_[pos_] == '<')
            return scan_markup();
        if (parse_text())
            return Token::Text;
    }
}

Token PullParser::scan_markup() {
    token_offset_ = pos_;
    if (pos_ + 1 >= in_.size())
        fail(pos_, "truncated markup");
    char c = in_[pos_ + 1];
    if (c == '?') {
        skip_pi();
        return next();
    }
    if (c == '!') {
        if (in_.compare(pos_, 4, "<!--") == 0) {
            skip_comment();
            return next();
        }
        if (in_.compare(pos_, 9, "<![CDATA[") == 0) {
            // handled by parse_text so adjacent runs merge
            if (parse_text())
                return Token::Text;
            return next();
        }
        if (in_.compare(pos_, 9, "<!DOCTYPE") == 0) {
            skip_doctype();
            return next();
        }
        fail(pos_, "unsupported declaration");
    }
    if (c == '/') {
        parse_end_tag();
        return Token::EndElement;
    }
    parse_start_tag();
    return Token::StartElement;
}

void PullParser::parse_start_tag() {
    size_t start = pos_;
    ++pos_; // '<'
    if (pos_ >= in_.size() || !is_name_start(in_[pos_]))
        fail(pos_, "expected element name");
    size_t name_begin = pos_;
    while (pos_ < in_.size() && is_name_char(in_[pos_]))
        ++pos_;
    name_.assign(in_.substr(name_begin, pos_ - name_begin));
    attrs_.clear();
    self_closing_ = false;

    for (;;) {
        while (pos_ < in_.size() && is_ws(in_[pos_]))
            ++pos_;
        if (pos_ >= in_.size())
            fail(start, "unterminated start tag <" + name_ + ">");
        if (in_[pos_] == '>') {
            ++pos_;
            break;
        }
        if (in_[pos_] == '/') {
            if (pos_ + 1 >= in_.size() || in_[pos_ + 1] != '>')
                fail(pos_, "malformed tag end");
            pos_ += 2;
            self_closing_ = true;
            break;
        }
        if (!is_name_start(in_[pos_]))
            fail(pos_, "expected attribute name in <" + name_ + ">");
        size_t attr_begin = pos_;
        while (pos_ < in_.size() && is_name_char(in_[pos_]))
            ++pos_;
        std::string attr_name(in_.substr(attr_begin, pos_ - attr_begin));
        while (pos_ < in_.size() && is_ws(in_[pos_]))
            ++pos_;
        if (pos_ >= in_.size() || in_[pos_] != '=')
            fail(pos_, "expected '=' after attribute " + attr_name);
        ++pos_;
        while (pos_ < in_.size() && is_ws(in_[pos_]))
            ++pos_;
        if (pos_ >= in_.size() || (in_[pos_] != '"' && in_[pos_] != '\''))
            fail(pos_, "expected quoted attribute value for " + attr_name);
        char quote = in_[pos_++];
        size_t value_begin = pos_;
        while (pos_ < in_.size() && in_[pos_] != quote && in_[pos_] != '<')
            ++pos_;
        if (pos_ >= in_.size() || in_[pos_] != quote)
            fail(value_begin, "unterminated attribute value for " + attr_name);
        attrs_.push_back(
            {std::move(attr_name), decode_entities(in_.substr(value_begin, pos_ - value_begin), value_begin)});
        ++pos_;
    }

    if (self_closing_) {
        pending_end_ = true;
    }
    open_.push_back(name_);
}

void PullParser::parse_end_tag() {
    ++pos_; // '<'
    ++pos_; // '/'
    if (pos_ >= in_.size() || !is_name_start(in_[pos_]))
        fail(pos_, "expected element name in end tag");
    size_t name_begin = pos_;
    while (pos_ < in_.size() && is_name_char(in_[pos_]))
        ++pos_;
    name_.assign(in_.substr(name_begin, pos_ - name_begin));
    while (pos_ < in_.size() && is_ws(in_[pos_]))
        ++pos_;
    if (pos_ >= in_.size() || in_[pos_] != '>')
        fail(pos_, "malformed end tag </" + name_ + ">");
    ++pos_;
    if (open_.empty())
        fail(token_offset_, "end tag </" + name_ + "> without open element");
    if (open_.back() != name_)
        fail(token_offset_, "mismatched end tag </" + name_ + ">, expected </" + open_.back() + ">");
    open_.pop_back();
}

bool PullParser::parse_text() {
    token_offset_ = pos_;
    text_.clear();
    bool saw_cdata = false;
    for (;;) {
        if (pos_ >= in_.size())
            break;
        if (in_.compare(pos_, 9, "<![CDATA[") == 0) {
            size_t end = in_.find("]]>", pos_ + 9);
            if (end == std::string_view::npos)
                fail(pos_, "unterminated CDATA section");
            text_.append(in_.substr(pos_ + 9, end - (pos_ + 9)));
            pos_ = end + 3;
            saw_cdata = true;
            continue;
        }
        if (in_[pos_] == '<')
            break;
        size_t run_begin = pos_;
        while (pos_ < in_.size() && in_[pos_] != '<')
            ++pos_;
        text_.append(decode_entities(in_.substr(run_begin, pos_ - run_begin), run_begin));
    }
    if (!saw_cdata) {
        bool all_ws = true;
        for (char c : text_)
            if (!is_ws(c)) {
                all_ws = false;
                break;
            }
        if (all_ws)
            return false; // inter-element whitespace
    }
    return true;
}

void PullParser::skip_comment() {
    size_t end = in_.find("-->", pos_ + 4);
    if (end == std::string_view::npos)
        fail(pos_, "unterminated comment");
    pos_ = end + 3;
}

void PullParser::skip_pi() {
    size_t end = in_.find("?>", pos_ + 2);
    if (end == std::string_view::npos)
        fail(pos_, "unterminated processing instruction");
    pos_ = end + 2;
}

void PullParser::skip_doctype() {
    // No internal-subset support; skip to the closing '>'.
    size_t end = in_.find('>', pos_);
    if (end == std::string_view::npos)
        fail(pos_, "unterminated DOCTYPE");
    pos_ = end + 1;
}

std::string PullParser::decode_entities(std::string_view raw, size_t base_offset) const {
    if (raw.find('&') == std::string_view::npos)
        return std::string(raw);
    std::string out;
    out.reserve(raw.size());
    for (size_t i = 0; i < raw.size();) {
        if (raw[i] != '&') {
            out.push_back(raw[i++]);
            continue;
        }
        size_t semi = raw.find(';', i + 1);
        if (semi == std::string_view::npos || semi - i > 12)
            fail(base_offset + i, "unterminated entity reference");
        std::string_view ent = raw.substr(i + 1, semi - i - 1);
        if (ent == "lt")
            out.push_back('<');
        else if (ent == "gt")
            out.push_back('>');
        else if (ent == "amp")
            out.push_back('&');
        else if (ent == "quot")
            out.push_back('"');
        else if (ent == "apos")
            out.push_back('\'');
        else if (!ent.empty() && ent[0] == '#') {
            unsigned long cp = 0;
            try {
                cp = (ent.size() > 1 && (ent[1] == 'x' || ent[1] == 'X'))
                         ? std::stoul(std::string(ent.substr(2)), nullptr, 16)
                         : std::stoul(std::string(ent.substr(1)), nullptr, 10);
            } catch (const std::exception&) {
                fail(base_offset + i, "bad character reference");
            }
            // UTF-8 encode
            if (cp < 0x80) {
                out.push_back(static_cast<char>(cp));
            } else if (cp < 0x800) {
                out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
                out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
            } else if (cp < 0x10000) {
                out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
                out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
                out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
            } else if (cp < 0x110000) {
                out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
                out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
                out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
                out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
            } else {
                fail(base_offset + i, "character reference out of range");
            }
        } else {
            fail(base_offset + i, "unknown entity &" + std::string(ent) + ";");
        }
        i = semi + 1;
    }
    return out;
}

std::string_view PullParser::capture_inner_xml() {
    if (pending_end_) { // self-closing element
        pending_end_ = false;
        if (!open_.empty())
            open_.pop_back();
        return {};
    }
    size_t depth = 1;
    size_t begin = pos_;
    for (;;) {
        Token t = next();
        switch (t) {
        case Token::StartElement:
            if (pending_end_) { // inner self-closing: consume synthesized end
                pending_end_ = false;
                if (!open_.empty())
                    open_.pop_back();
            } else {
                ++depth;
            }
            break;
        case Token::EndElement:
            if (--depth == 0)
                return in_.substr(begin, token_offset_ - begin);
            break;
        case Token::Text:
            break;
        case Token::End:
            fail(pos_, "unexpected end of input inside element");
        }
    }
}

std::string PullParser::read_element_text() {
    std::string out;
    if (pending_end_) {
        pending_end_ = false;
        if (!open_.empty())
            open_.pop_back();
        return out;
    }
    size_t depth = 1;
    while (depth > 0) {
        Token t = next();
        switch (t) {
        case Token::StartElement:
            if (pending_end_) {
                pending_end_ = false;
                if (!open_.empty())
                    open_.pop_back();
            } else {
                ++depth;
            }
            break;
        case Token::EndElement:
            --depth;
            break;
        case Token::Text:
            out += text_;
            break;
        case Token::End:
            fail(pos_, "unexpected end of input inside element");
        }
    }
    return out;
}

void PullParser::skip_element() {
    capture_inner_xml();
}

std::string escape(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        switch (c) {
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '&': out += "&amp;"; break;
        case '"': out += "&quot;"; break;
        case '\'': out += "&apos;"; break;
        default: out.push_back(c);
        }
    }
    return out;
}

} // namespace mh::xml
