#include "policylens/url.hpp"

#include "policylens/text.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <vector>

namespace policylens {

namespace {

// Second-level public suffixes we treat as one label. Not the full PSL.
constexpr std::array<std::string_view, 24> kMultiLabelSuffixes = {
    "co.uk",  "org.uk", "ac.uk",  "gov.uk", "me.uk",  "com.au", "net.au", "org.au",
    "co.nz",  "co.jp",  "ne.jp",  "or.jp",  "com.br", "com.cn", "com.mx", "co.in",
    "co.za",  "com.tr", "com.ar", "co.kr",  "com.sg", "com.hk", "gv.at",  "co.at",
};

bool is_ipv4(std::string_view host) {
    int dots = 0;
    for (char c : host) {
        if (c == '.') {
            ++dots;
        } else if (c < '0' || c > '9') {
            return false;
        }
    }
    return dots == 3;
}

// Collapses "." and ".." segments of an absolute path.
std::string normalize_path(std::string_view path) {
    std::vector<std::string_view> out;
    std::size_t pos = 1;
    const bool trailing_slash = path.size() > 1 && (path.ends_with('/') || path.ends_with("/.") || path.ends_with("/.."));
    while (pos <= path.size()) {
        auto next = path.find('/', pos);
        if (next == std::string_view::npos) {
            next = path.size();
        }
        auto seg = path.substr(pos, next - pos);
        if (seg == "..") {
            if (!out.empty()) {
                out.pop_back();
            }
        } else if (!seg.empty() && seg != ".") {
            out.push_back(seg);
        }
        pos = next + 1;
    }
    std::string result;
    for (auto seg : out) {
        result += '/';
        result += seg;
    }
    if (result.empty() || trailing_slash) {
        result += '/';
    }
    return result;
}

} // namespace

std::string Url::origin() const {
    std::string out = scheme + "://" + host;
    if (!default_port()) {
        out += ':' + std::to_string(port);
    }
    return out;
}

std::string Url::str() const { return origin() + target; }

std::optional<Url> parse_url(std::string_view text) {
    text = trim(text);
    const auto scheme_end = text.find("://");
    if (scheme_end == std::string_view::npos) {
        return std::nullopt;
    }
    Url url;
    url.scheme = to_lower(text.substr(0, scheme_end));
    if (url.scheme != "http" && url.scheme != "https") {
        return std::nullopt;
    }
    url.port = url.scheme == "https" ? 443 : 80;
    auto rest = text.substr(scheme_end + 3);
    if (auto hash = rest.find('#'); hash != std::string_view::npos) {
        rest = rest.substr(0, hash);
    }
    const auto authority_end = rest.find_first_of("/?");
    auto authority = rest.substr(0, authority_end);
    if (auto at = authority.rfind('@'); at != std::string_view::npos) {
        authority = authority.substr(at + 1);
    }
    if (auto colon = authority.rfind(':'); colon != std::string_view::npos) {
        const auto port_text = authority.substr(colon + 1);
        unsigned value = 0;
        auto [ptr, ec] = std::from_chars(port_text.data(), port_text.data() + port_text.size(), value);
        if (ec != std::errc{} || ptr != port_text.data() + port_text.size() || value == 0 || value > 65535) {
            return std::nullopt;
        }
        url.port = static_cast<std::uint16_t>(value);
        authority = authority.substr(0, colon);
    }
    if (authority.empty()) {
        return std::nullopt;
    }
    for (char c : authority) {
        const bool ok = std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '.' || c == '_' ||
                        static_cast<unsigned char>(c) >= 0x80;
        if (!ok) {
            return std::nullopt;
        }
    }
    url.host = to_lower(authority);
    if (authority_end == std::string_view::npos) {
        url.target = "/";
    } else {
        auto target = rest.substr(authority_end);
        if (target.starts_with('?')) {
            url.target = "/" + std::string(target);
        } else {
            const auto q = target.find('?');
            url.target = normalize_path(target.substr(0, q));
            if (q != std::string_view::npos) {
                url.target += target.substr(q);
            }
        }
    }
    return url;
}

std::optional<Url> resolve_url(const Url& base, std::string_view href) {
    href = trim(href);
    if (auto hash = href.find('#'); hash != std::string_view::npos) {
        href = href.substr(0, hash);
    }
    if (href.empty()) {
        return base;
    }
    if (href.starts_with("//")) {
        return parse_url(base.scheme + ":" + std::string(href));
    }
    const auto colon = href.find(':');
    const auto first_delim = href.find_first_of("/?");
    if (colon != std::string_view::npos && (first_delim == std::string_view::npos || colon < first_delim)) {
        // Has a scheme of its own.
        return parse_url(href);
    }
    Url out = base;
    if (href.starts_with('/')) {
        const auto q = href.find('?');
        out.target = normalize_path(href.substr(0, q));
        if (q != std::string_view::npos) {
            out.target += href.substr(q);
        }
        return out;
    }
    std::string_view base_path = base.target;
    if (auto q = base_path.find('?'); q != std::string_view::npos) {
        base_path = base_path.substr(0, q);
    }
    if (href.starts_with('?')) {
        out.target = std::string(base_path) + std::string(href);
        return out;
    }
    const auto dir = std::string(base_path.substr(0, base_path.rfind('/') + 1));
    const auto q = href.find('?');
    out.target = normalize_path(dir + std::string(href.substr(0, q)));
    if (q != std::string_view::npos) {
        out.target += href.substr(q);
    }
    return out;
}

std::string registrable_domain(std::string_view host) {
    std::string h = to_lower(trim(host));
    while (!h.empty() && h.back() == '.') {
        h.pop_back();
    }
    if (is_ipv4(h) || h.find('.') == std::string::npos) {
        return h;
    }
    const auto last = h.rfind('.');
    const auto second = h.rfind('.', last - 1);
    if (second == std::string::npos) {
        return h;
    }
    const std::string_view two_labels = std::string_view(h).substr(second + 1);
    const bool multi = std::find(kMultiLabelSuffixes.begin(), kMultiLabelSuffixes.end(), two_labels) !=
                       kMultiLabelSuffixes.end();
    if (!multi) {
        return h.substr(second + 1);
    }
    if (second == 0) {
        return h;
    }
    const auto third = h.rfind('.', second - 1);
    return third == std::string::npos ? h : h.substr(third + 1);
}

} // namespace policylens
