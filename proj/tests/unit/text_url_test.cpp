#include "policylens/clock.hpp"
#include "policylens/text.hpp"
#include "policylens/url.hpp"

#include <gtest/gtest.h>

using namespace policylens;

TEST(Text, CollapseAndCount) {
    EXPECT_EQ(collapse_whitespace("  a \t b\n\nc  "), "a b c");
    EXPECT_EQ(count_words(""), 0u);
    EXPECT_EQ(count_words(" one two\nthree\t"), 3u);
}

TEST(Text, QuestionKeyIgnoresCaseAndSpacing) {
    EXPECT_EQ(question_key("  Who  gets\nMY data? "), question_key("who gets my data?"));
    EXPECT_NE(question_key("Who gets my data?"), question_key("Who gets my data"));
}

TEST(Text, SplitLinesHandlesCrLf) {
    auto lines = split_lines("a\r\nb\nc");
    ASSERT_EQ(lines.size(), 3u);
    EXPECT_EQ(lines[0], "a");
    EXPECT_EQ(lines[2], "c");
}

TEST(Text, Fnv1aKnownVectors) {
    // Reference values of 64-bit FNV-1a.
    EXPECT_EQ(fnv1a64(""), 0xcbf29ce484222325ULL);
    EXPECT_EQ(fnv1a64("a"), 0xaf63dc4c8601ec8cULL);
    EXPECT_EQ(hex64(0xabcULL), "0000000000000abc");
}

TEST(Url, ParseAndPrint) {
    auto u = parse_url("HTTP://Shop.Example.com:8080/a/b?x=1#frag");
    ASSERT_TRUE(u);
    EXPECT_EQ(u->scheme, "http");
    EXPECT_EQ(u->host, "shop.example.com");
    EXPECT_EQ(u->port, 8080);
    EXPECT_EQ(u->target, "/a/b?x=1");
    EXPECT_EQ(u->str(), "http://shop.example.com:8080/a/b?x=1");
    EXPECT_FALSE(parse_url("not a url"));
    EXPECT_FALSE(parse_url("ftp://example.com/"));
    EXPECT_FALSE(parse_url("/relative"));
}

TEST(Url, ResolveRelativeReferences) {
    auto base = *parse_url("http://example.com/shop/item/7?x=1");
    EXPECT_EQ(resolve_url(base, "/privacy")->str(), "http://example.com/privacy");
    EXPECT_EQ(resolve_url(base, "privacy")->str(), "http://example.com/shop/item/privacy");
    EXPECT_EQ(resolve_url(base, "../legal/privacy")->str(), "http://example.com/shop/legal/privacy");
    EXPECT_EQ(resolve_url(base, "//cdn.example.org/p")->str(), "http://cdn.example.org/p");
    EXPECT_EQ(resolve_url(base, "?lang=de")->str(), "http://example.com/shop/item/7?lang=de");
    EXPECT_FALSE(resolve_url(base, "mailto:privacy@example.com"));
    EXPECT_FALSE(resolve_url(base, "javascript:void(0)"));
}

TEST(Url, RegistrableDomain) {
    EXPECT_EQ(registrable_domain("www.example.com"), "example.com");
    EXPECT_EQ(registrable_domain("a.b.shop.example.co.uk"), "example.co.uk");
    EXPECT_EQ(registrable_domain("Example.COM"), "example.com");
    EXPECT_EQ(registrable_domain("localhost"), "localhost");
    EXPECT_EQ(registrable_domain("127.0.0.1"), "127.0.0.1");
    EXPECT_EQ(registrable_domain("www.pageturner-books.test"), "pageturner-books.test");
}

TEST(Clock, UtcRoundTrip) {
    auto t = parse_utc("2024-05-01T12:34:56Z");
    EXPECT_EQ(format_utc(t), "2024-05-01T12:34:56Z");
}
