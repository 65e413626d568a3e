#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "mh/error.hpp"

namespace mh::xml {

// Thrown on ill-formed input; `offset` is the byte position of the first violation.
class ParseError : public Error {
public:
    ParseError(size_t offset, std::string message)
        : Error(Errc::malformed_response,
                "xml parse error at byte " + std::to_string(offset) + ": " + message),
          offset_(offset) {}

    size_t offset() const { return offset_; }

private:
    size_t offset_;
};

struct Attr {
    std::string name;
    std::string value;
};

enum class Token {
    StartElement,
    EndElement,
    Text, // entity-decoded character data, CDATA included; adjacent runs merged
    End,  // end of document
};

// Forward-only pull parser over a single in-memory buffer. It recognizes the
// subset of XML that protocol envelopes and metadata payloads actually use:
// elements, attributes, character data, CDATA, comments, processing
// instructions and the five predefined plus numeric character references.
// DOCTYPE declarations are skipped. The input buffer must outlive the parser.
class PullParser {
public:
    explicit PullParser(std::string_view input);

    Token next();

    // Valid after a StartElement or EndElement token.
    const std::string& name() const { return name_; }
    std::string_view local_name() const;
    const std::vector<Attr>& attributes() const { return attrs_; }
    std::string_view attribute(std::string_view local) const; // "" when absent

    // Valid after a Text token.
    const std::string& text() const { return text_; }

    // Byte offset where the current token started.
    size_t token_offset() const { return token_offset_; }

    // Call directly after a StartElement token: consumes everything up to and
    // including the matching end tag and returns the raw bytes in between.
    // For a self-closing tag this returns an empty view.
    std::string_view capture_inner_xml();

    // Call directly after a StartElement token: consumes the subtree and
    // returns the concatenation of all text content inside it.
    std::string read_element_text();

    // Skips the remainder of the current element (after StartElement).
    void skip_element();

private:
    Token scan_markup();
    void parse_start_tag();
    void parse_end_tag();
    bool parse_text(); // returns false when the run was all skippable
    void skip_comment();
    void skip_pi();
    void skip_doctype();
    std::string decode_entities(std::string_view raw, size_t base_offset) const;
    [[noreturn]] void fail(size_t offset, const std::string& message) const;

    std::string_view in_;
    size_t pos_ = 0;
    size_t token_offset_ = 0;
    std::string name_;
    std::string text_;
    std::vector<Attr> attrs_;
    bool self_closing_ = false;
    bool pending_end_ = false; // synthesized EndElement for self-closing tags
    std::vector<std::string> open_;
    bool done_ = false;
};

std::string escape(std::string_view s); // text/attribute escaping for writers

} // namespace mh::xml
