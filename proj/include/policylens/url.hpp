#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace policylens {

/// Minimal absolute http(s) URL. `target` is path plus query, always starting with '/'.
struct Url {
    std::string scheme;
    std::string host;
    std::uint16_t port = 0;
    std::string target = "/";

    bool default_port() const { return (scheme == "http" && port == 80) || (scheme == "https" && port == 443); }
    std::string origin() const;
    std::string str() const;
};

/// Parses an absolute http or https URL. Fragments are dropped.
std::optional<Url> parse_url(std::string_view text);

/// Resolves `href` against an absolute base. Returns nullopt for non-http(s)
/// schemes (mailto:, javascript:, ...) and unparsable input.
std::optional<Url> resolve_url(const Url& base, std::string_view href);

/// eTLD+1 for a host name, e.g. "shop.example.co.uk" -> "example.co.uk".
/// IP literals and single-label hosts are returned unchanged (lowercased).
std::string registrable_domain(std::string_view host);

} // namespace policylens
