#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace policylens::html {

enum class TokenKind { StartTag, EndTag, Text, Comment };

struct Token {
    TokenKind kind = TokenKind::Text;
    std::string name;  // lowercased tag name for tags
    std::string data;  // decoded text for Text tokens
    std::vector<std::pair<std::string, std::string>> attrs;
    bool self_closing = false;

    std::string_view attr(std::string_view key) const;
};

/// Lenient HTML tokenizer. Contents of script/style/textarea/title are
/// emitted as a single raw Text token; unterminated constructs degrade to text.
std::vector<Token> tokenize(std::string_view html);

/// Decodes named (common subset) and numeric character references.
std::string decode_entities(std::string_view text);

std::string escape(std::string_view text);

bool is_void_element(std::string_view name);

} // namespace policylens::html
