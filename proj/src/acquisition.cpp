#include "policylens/acquisition.hpp"

#include "policylens/html.hpp"
#include "policylens/text.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cstdio>
#include <sys/wait.h>
#include <tuple>

namespace policylens {

namespace {

bool in_list(std::string_view name, std::initializer_list<std::string_view> list) {
    return std::find(list.begin(), list.end(), name) != list.end();
}

bool is_stripped(std::string_view name) {
    return in_list(name, {"script", "style", "noscript", "template", "nav", "header", "footer", "aside", "form", "head",
                          "svg", "iframe", "select", "button"});
}

bool is_block(std::string_view name) {
    return in_list(name, {"address", "article", "blockquote", "body",   "br",      "caption", "dd",      "details",
                          "dialog",  "div",     "dl",         "dt",     "fieldset", "figcaption", "figure", "h1",
                          "h2",      "h3",      "h4",         "h5",     "h6",      "hr",      "html",    "li",
                          "main",    "ol",      "p",          "pre",    "section", "summary", "table",   "tbody",
                          "td",      "tfoot",   "th",         "thead",  "tr",      "ul"});
}

bool marks_footer(const html::Token& tag) {
    if (tag.name == "footer") {
        return true;
    }
    const auto id = to_lower(tag.attr("id"));
    const auto cls = to_lower(tag.attr("class"));
    return id.find("footer") != std::string::npos || cls.find("footer") != std::string::npos;
}

std::string percent_decode(std::string_view s) {
    std::string out;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '%' && i + 2 < s.size() && std::isxdigit(static_cast<unsigned char>(s[i + 1])) &&
            std::isxdigit(static_cast<unsigned char>(s[i + 2]))) {
            out += static_cast<char>(std::stoi(std::string(s.substr(i + 1, 2)), nullptr, 16));
            i += 2;
        } else {
            out += s[i];
        }
    }
    return out;
}

// Path and query of an href with separators turned into spaces, so
// "/privacy-policy" matches the keyword "privacy policy".
std::string href_words(std::string_view href) {
    auto path = percent_decode(href);
    if (auto scheme = path.find("://"); scheme != std::string::npos) {
        auto slash = path.find('/', scheme + 3);
        path = slash == std::string::npos ? std::string() : path.substr(slash);
    }
    for (auto& c : path) {
        if (c == '-' || c == '_' || c == '/' || c == '.' || c == '+' || c == '?' || c == '=' || c == '&') {
            c = ' ';
        }
    }
    return collapse_whitespace(to_lower(path));
}

struct Candidate {
    std::size_t keyword_rank;
    int via_href;  // 0 = anchor text matched
    int outside_footer;
    std::size_t order;
    std::string url;

    auto key() const { return std::tie(keyword_rank, via_href, outside_footer, order); }
};

std::string shell_quote(std::string_view s) {
    std::string out = "'";
    for (char c : s) {
        if (c == '\'') {
            out += "'\\''";
        } else {
            out += c;
        }
    }
    return out + "'";
}

} // namespace

std::string_view to_string(AcquisitionStatus status) {
    switch (status) {
    case AcquisitionStatus::Ok: return "ok";
    case AcquisitionStatus::LinkNotFound: return "link_not_found";
    case AcquisitionStatus::FetchBlocked: return "fetch_blocked";
    case AcquisitionStatus::TooShort: return "too_short";
    }
    return "link_not_found";
}

std::optional<AcquisitionStatus> acquisition_status_from_string(std::string_view text) {
    for (auto s : {AcquisitionStatus::Ok, AcquisitionStatus::LinkNotFound, AcquisitionStatus::FetchBlocked,
                   AcquisitionStatus::TooShort}) {
        if (to_string(s) == text) {
            return s;
        }
    }
    return std::nullopt;
}

DiscoveryResult discover_policy_url(std::string_view page_html, const Url& base_url,
                                    const std::vector<std::string>& keywords) {
    const auto tokens = html::tokenize(page_html);

    struct Open {
        std::string name;
        bool footer;
    };
    std::vector<Open> stack;
    std::size_t footer_depth = 0;

    std::vector<Candidate> candidates;
    std::optional<std::string> anchor_href;
    std::string anchor_text;
    bool anchor_in_footer = false;
    std::size_t anchor_order = 0;

    auto finish_anchor = [&] {
        if (!anchor_href) {
            return;
        }
        const auto text = to_lower(collapse_whitespace(anchor_text));
        const auto path = href_words(*anchor_href);
        auto resolved = resolve_url(base_url, *anchor_href);
        if (resolved) {
            for (std::size_t k = 0; k < keywords.size(); ++k) {
                const auto kw = to_lower(keywords[k]);
                const bool in_text = text.find(kw) != std::string::npos;
                const bool in_href = path.find(kw) != std::string::npos;
                if (in_text || in_href) {
                    candidates.push_back(
                        {k, in_text ? 0 : 1, anchor_in_footer ? 0 : 1, anchor_order, resolved->str()});
                    break;
                }
            }
        }
        anchor_href.reset();
        anchor_text.clear();
        ++anchor_order;
    };

    for (const auto& tok : tokens) {
        switch (tok.kind) {
        case html::TokenKind::StartTag: {
            if (tok.name == "a") {
                finish_anchor();
                if (auto href = tok.attr("href"); !href.empty()) {
                    anchor_href = std::string(href);
                    anchor_in_footer = footer_depth > 0;
                    for (auto key : {"aria-label", "title"}) {
                        if (auto label = tok.attr(key); !label.empty()) {
                            anchor_text += ' ';
                            anchor_text += label;
                        }
                    }
                }
            }
            if (!tok.self_closing && !html::is_void_element(tok.name) && tok.name != "a") {
                const bool footer = marks_footer(tok);
                stack.push_back({tok.name, footer});
                footer_depth += footer ? 1 : 0;
            }
            break;
        }
        case html::TokenKind::EndTag: {
            if (tok.name == "a") {
                finish_anchor();
                break;
            }
            auto it = std::find_if(stack.rbegin(), stack.rend(), [&](const Open& o) { return o.name == tok.name; });
            if (it != stack.rend()) {
                const auto keep = static_cast<std::size_t>(stack.rend() - it) - 1;
                for (std::size_t i = keep; i < stack.size(); ++i) {
                    footer_depth -= stack[i].footer ? 1 : 0;
                }
                stack.resize(keep);
            }
            break;
        }
        case html::TokenKind::Text:
            if (anchor_href) {
                anchor_text += tok.data;
            }
            break;
        case html::TokenKind::Comment: break;
        }
    }
    finish_anchor();

    DiscoveryResult result;
    if (candidates.empty()) {
        return result;
    }
    std::stable_sort(candidates.begin(), candidates.end(),
                     [](const Candidate& a, const Candidate& b) { return a.key() < b.key(); });
    result.url = candidates.front().url;
    for (const auto& c : candidates) {
        if (c.url != *result.url &&
            std::find(result.alternates.begin(), result.alternates.end(), c.url) == result.alternates.end()) {
            result.alternates.push_back(c.url);
        }
    }
    return result;
}

std::string extract_text(std::string_view page_html) {
    const auto tokens = html::tokenize(page_html);
    std::vector<std::string> lines;
    std::string current;
    auto flush = [&] {
        auto line = collapse_whitespace(current);
        if (!line.empty()) {
            lines.push_back(std::move(line));
        }
        current.clear();
    };

    std::string skip_name;
    std::size_t skip_depth = 0;
    for (const auto& tok : tokens) {
        if (skip_depth > 0) {
            if (tok.name == skip_name && !tok.self_closing) {
                if (tok.kind == html::TokenKind::StartTag) {
                    ++skip_depth;
                } else if (tok.kind == html::TokenKind::EndTag) {
                    --skip_depth;
                }
            }
            continue;
        }
        switch (tok.kind) {
        case html::TokenKind::StartTag:
            if (is_stripped(tok.name) && !tok.self_closing && !html::is_void_element(tok.name)) {
                flush();
                skip_name = tok.name;
                skip_depth = 1;
            } else if (is_block(tok.name)) {
                flush();
            }
            break;
        case html::TokenKind::EndTag:
            if (is_block(tok.name)) {
                flush();
            }
            break;
        case html::TokenKind::Text: current += tok.data; break;
        case html::TokenKind::Comment: break;
        }
    }
    flush();
    return join(lines, "\n");
}

std::string wrap_paragraphs(std::string_view text) {
    std::string out;
    for (auto line : split_lines(text)) {
        out += "<p>";
        out += html::escape(line);
        out += "</p>\n";
    }
    return out;
}

CommandRenderFetcher::CommandRenderFetcher(std::string command_template, double timeout_seconds)
    : command_template_(std::move(command_template)), timeout_seconds_(timeout_seconds) {}

FetchResult CommandRenderFetcher::fetch(const Url& url) {
    std::string cmd = command_template_;
    const auto quoted = shell_quote(url.str());
    for (auto pos = cmd.find("{url}"); pos != std::string::npos; pos = cmd.find("{url}", pos + quoted.size())) {
        cmd.replace(pos, 5, quoted);
    }
    const auto secs = std::max(1, static_cast<int>(timeout_seconds_ + 0.999));
    cmd = "timeout " + std::to_string(secs) + " sh -c " + shell_quote(cmd) + " 2>/dev/null";

    FetchResult result;
    result.final_url = url.str();
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) {
        result.diagnostic = "renderer could not be started";
        return result;
    }
    std::array<char, 4096> buf{};
    std::size_t n = 0;
    while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) {
        result.body.append(buf.data(), n);
    }
    const int status = pclose(pipe);
    if (status != 0) {
        result.body.clear();
        result.diagnostic = WIFEXITED(status) && WEXITSTATUS(status) == 124 ? "renderer timed out"
                                                                             : "renderer exited with an error";
        return result;
    }
    result.ok = true;
    return result;
}

std::unique_ptr<PageFetcher> make_fetcher(const AcquisitionConfig& config) {
    if (config.render_command) {
        return std::make_unique<CommandRenderFetcher>(*config.render_command, config.fetch_timeout_seconds);
    }
    return std::make_unique<HttpFetcher>(config);
}

PolicyAcquirer::PolicyAcquirer(AcquisitionConfig config, std::shared_ptr<PageFetcher> fetcher, Clock clock)
    : config_(std::move(config)), fetcher_(std::move(fetcher)), clock_(std::move(clock)) {}

FetchResult PolicyAcquirer::fetch_page(std::string_view url) {
    auto parsed = parse_url(url);
    if (!parsed) {
        return FetchResult{false, {}, std::string(url), "not an absolute http(s) URL"};
    }
    try {
        return fetcher_->fetch(*parsed);
    } catch (const std::exception& e) {
        return FetchResult{false, {}, parsed->str(), e.what()};
    }
}

PolicyDocument PolicyAcquirer::acquire(std::string_view page_url, std::optional<std::string_view> policy_url) {
    PolicyDocument doc;
    doc.fetched_at = clock_();
    auto fail = [&](AcquisitionStatus status, std::string diagnostic) {
        doc.status = status;
        doc.text.clear();
        doc.word_count = 0;
        doc.diagnostic = std::move(diagnostic);
        return doc;
    };

    const auto page = parse_url(page_url);
    if (!page) {
        return fail(AcquisitionStatus::LinkNotFound, "page URL is not an absolute http(s) URL");
    }
    doc.domain = registrable_domain(page->host);

    std::string target;
    if (policy_url) {
        auto resolved = resolve_url(*page, *policy_url);
        if (!resolved) {
            return fail(AcquisitionStatus::LinkNotFound, "supplied policy URL is not http(s)");
        }
        target = resolved->str();
    } else {
        auto landing = fetch_page(page->str());
        if (!landing.ok) {
            return fail(AcquisitionStatus::FetchBlocked, "page fetch failed: " + landing.diagnostic);
        }
        const auto base = parse_url(landing.final_url).value_or(*page);
        auto found = discover_policy_url(landing.body, base, config_.keywords);
        if (!found.url) {
            return fail(AcquisitionStatus::LinkNotFound, "no anchor matched the policy keywords");
        }
        target = *found.url;
        doc.alternates = std::move(found.alternates);
    }
    doc.source_url = target;

    auto policy = fetch_page(target);
    if (!policy.ok) {
        return fail(AcquisitionStatus::FetchBlocked, "policy fetch failed: " + policy.diagnostic);
    }
    doc.source_url = policy.final_url.empty() ? target : policy.final_url;
    auto text = extract_text(policy.body);
    const auto words = count_words(text);
    if (words < config_.min_words) {
        return fail(AcquisitionStatus::TooShort,
                    "extracted " + std::to_string(words) + " words, minimum is " + std::to_string(config_.min_words));
    }
    doc.text = std::move(text);
    doc.word_count = words;
    doc.status = AcquisitionStatus::Ok;
    return doc;
}

} // namespace policylens
