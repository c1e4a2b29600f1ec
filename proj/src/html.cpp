#include "policylens/html.hpp"

#include "policylens/text.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>

namespace policylens::html {

namespace {

struct NamedEntity {
    std::string_view name;
    std::string_view value;
};

constexpr std::array<NamedEntity, 22> kEntities = {{
    {"amp", "&"},        {"lt", "<"},         {"gt", ">"},         {"quot", "\""},      {"apos", "'"},
    {"nbsp", " "},       {"copy", "\xC2\xA9"}, {"reg", "\xC2\xAE"}, {"auml", "\xC3\xA4"}, {"ouml", "\xC3\xB6"},
    {"uuml", "\xC3\xBC"}, {"Auml", "\xC3\x84"}, {"Ouml", "\xC3\x96"}, {"Uuml", "\xC3\x9C"}, {"szlig", "\xC3\x9F"},
    {"eacute", "\xC3\xA9"}, {"ndash", "\xE2\x80\x93"}, {"mdash", "\xE2\x80\x94"}, {"rsquo", "\xE2\x80\x99"},
    {"lsquo", "\xE2\x80\x98"}, {"hellip", "\xE2\x80\xA6"}, {"middot", "\xC2\xB7"},
}};

void append_utf8(std::string& out, unsigned cp) {
    // No-break space decodes like &nbsp;, to a plain space.
    if (cp == 0xA0) {
        cp = ' ';
    }
    if (cp == 0 || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) {
        cp = 0xFFFD;
    }
    if (cp < 0x80) {
        out += static_cast<char>(cp);
    } else if (cp < 0x800) {
        out += static_cast<char>(0xC0 | (cp >> 6));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    } else if (cp < 0x10000) {
        out += static_cast<char>(0xE0 | (cp >> 12));
        out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    } else {
        out += static_cast<char>(0xF0 | (cp >> 18));
        out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
        out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    }
}

bool is_name_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == ':';
}

bool is_raw_text(std::string_view name) {
    return name == "script" || name == "style" || name == "textarea" || name == "title";
}

// Case-insensitive search for "</name" starting at pos.
std::size_t find_close_tag(std::string_view html, std::size_t pos, std::string_view name) {
    const std::string needle = "</" + std::string(name);
    while (pos < html.size()) {
        auto lt = html.find("</", pos);
        if (lt == std::string_view::npos || lt + needle.size() > html.size()) {
            return std::string_view::npos;
        }
        if (to_lower(html.substr(lt, needle.size())) == needle) {
            const auto after = lt + needle.size();
            if (after == html.size() || !is_name_char(html[after])) {
                return lt;
            }
        }
        pos = lt + 2;
    }
    return std::string_view::npos;
}

} // namespace

std::string_view Token::attr(std::string_view key) const {
    for (const auto& [k, v] : attrs) {
        if (k == key) {
            return v;
        }
    }
    return {};
}

bool is_void_element(std::string_view name) {
    static constexpr std::array<std::string_view, 14> kVoid = {
        "area", "base", "br", "col", "embed", "hr", "img", "input", "link", "meta", "param", "source", "track", "wbr"};
    return std::find(kVoid.begin(), kVoid.end(), name) != kVoid.end();
}

std::string decode_entities(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    std::size_t i = 0;
    while (i < text.size()) {
        if (text[i] != '&') {
            out += text[i++];
            continue;
        }
        const auto semi = text.find(';', i + 1);
        if (semi == std::string_view::npos || semi - i > 12) {
            out += text[i++];
            continue;
        }
        const auto body = text.substr(i + 1, semi - i - 1);
        bool done = false;
        if (body.size() > 1 && body[0] == '#') {
            unsigned cp = 0;
            const bool hex = body[1] == 'x' || body[1] == 'X';
            const auto digits = body.substr(hex ? 2 : 1);
            auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), cp, hex ? 16 : 10);
            if (!digits.empty() && ec == std::errc{} && ptr == digits.data() + digits.size()) {
                append_utf8(out, cp);
                done = true;
            }
        } else {
            for (const auto& e : kEntities) {
                if (e.name == body) {
                    out += e.value;
                    done = true;
                    break;
                }
            }
        }
        if (done) {
            i = semi + 1;
        } else {
            out += text[i++];
        }
    }
    return out;
}

std::string escape(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    for (char c : text) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
    return out;
}

std::vector<Token> tokenize(std::string_view html) {
    std::vector<Token> tokens;
    std::string pending_text;
    auto flush_text = [&] {
        if (!pending_text.empty()) {
            tokens.push_back(Token{TokenKind::Text, {}, decode_entities(pending_text), {}, false});
            pending_text.clear();
        }
    };

    std::size_t i = 0;
    while (i < html.size()) {
        if (html[i] != '<') {
            pending_text += html[i++];
            continue;
        }
        if (html.substr(i, 4) == "<!--") {
            flush_text();
            auto end = html.find("-->", i + 4);
            auto stop = end == std::string_view::npos ? html.size() : end;
            tokens.push_back(Token{TokenKind::Comment, {}, std::string(html.substr(i + 4, stop - i - 4)), {}, false});
            i = end == std::string_view::npos ? html.size() : end + 3;
            continue;
        }
        if (i + 1 < html.size() && (html[i + 1] == '!' || html[i + 1] == '?')) {
            // Doctype or processing instruction.
            flush_text();
            auto end = html.find('>', i);
            i = end == std::string_view::npos ? html.size() : end + 1;
            continue;
        }
        const bool closing = i + 1 < html.size() && html[i + 1] == '/';
        std::size_t j = i + (closing ? 2 : 1);
        if (j >= html.size() || !std::isalpha(static_cast<unsigned char>(html[j]))) {
            pending_text += html[i++];
            continue;
        }
        const auto name_start = j;
        while (j < html.size() && is_name_char(html[j])) {
            ++j;
        }
        Token tag;
        tag.kind = closing ? TokenKind::EndTag : TokenKind::StartTag;
        tag.name = to_lower(html.substr(name_start, j - name_start));

        // Attributes.
        bool terminated = false;
        while (j < html.size()) {
            while (j < html.size() && std::isspace(static_cast<unsigned char>(html[j]))) {
                ++j;
            }
            if (j >= html.size()) {
                break;
            }
            if (html[j] == '>') {
                ++j;
                terminated = true;
                break;
            }
            if (html[j] == '/') {
                tag.self_closing = true;
                ++j;
                continue;
            }
            const auto key_start = j;
            while (j < html.size() && !std::isspace(static_cast<unsigned char>(html[j])) && html[j] != '=' &&
                   html[j] != '>' && html[j] != '/') {
                ++j;
            }
            std::string key = to_lower(html.substr(key_start, j - key_start));
            std::string value;
            while (j < html.size() && std::isspace(static_cast<unsigned char>(html[j]))) {
                ++j;
            }
            if (j < html.size() && html[j] == '=') {
                ++j;
                while (j < html.size() && std::isspace(static_cast<unsigned char>(html[j]))) {
                    ++j;
                }
                if (j < html.size() && (html[j] == '"' || html[j] == '\'')) {
                    const char quote = html[j++];
                    const auto end = html.find(quote, j);
                    const auto stop = end == std::string_view::npos ? html.size() : end;
                    value = decode_entities(html.substr(j, stop - j));
                    j = end == std::string_view::npos ? html.size() : end + 1;
                } else {
                    const auto v_start = j;
                    while (j < html.size() && !std::isspace(static_cast<unsigned char>(html[j])) && html[j] != '>') {
                        ++j;
                    }
                    value = decode_entities(html.substr(v_start, j - v_start));
                }
            }
            if (!key.empty()) {
                tag.attrs.emplace_back(std::move(key), std::move(value));
            }
        }
        if (!terminated) {
            // Unterminated tag at EOF: treat the rest as text.
            pending_text += html.substr(i);
            break;
        }
        flush_text();
        const bool raw = tag.kind == TokenKind::StartTag && !tag.self_closing && is_raw_text(tag.name);
        const std::string raw_name = tag.name;
        tokens.push_back(std::move(tag));
        i = j;
        if (raw) {
            auto close = find_close_tag(html, i, raw_name);
            const auto stop = close == std::string_view::npos ? html.size() : close;
            if (stop > i) {
                std::string body(html.substr(i, stop - i));
                tokens.push_back(Token{TokenKind::Text, {}, raw_name == "textarea" || raw_name == "title"
                                                                  ? decode_entities(body)
                                                                  : body,
                                       {}, false});
            }
            if (close == std::string_view::npos) {
                i = html.size();
            } else {
                auto gt = html.find('>', close);
                tokens.push_back(Token{TokenKind::EndTag, raw_name, {}, {}, false});
                i = gt == std::string_view::npos ? html.size() : gt + 1;
            }
        }
    }
    flush_text();
    return tokens;
}

} // namespace policylens::html
