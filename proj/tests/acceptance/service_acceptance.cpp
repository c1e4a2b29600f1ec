#include "policylens/api.hpp"
#include "policylens/report.hpp"

#include "fixture_server.hpp"
#include "helpers.hpp"

#include <gtest/gtest.h>
#include <httplib.h>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <set>
#include <thread>

using namespace policylens;
using nlohmann::json;
using testsupport::request;

namespace {

const testsupport::Scores kShopScores = {{"Transparency", 3}, {"Security", 4}, {"Retention", 2}};

void add_shop(testsupport::TestEngine& t) {
    testsupport::add_site(*t.fetcher, "shop.test", testsupport::policy_text(150, "ShopPolicy"));
    t.mock->script_contains("Privacy policy:\nShopPolicy", ModelTier::Assessment, testsupport::assessment_reply(kShopScores));
}

json assess(ApiRouter& router, const std::string& url) {
    auto r = router.handle(request("POST", "/assess", json{{"page_url", url}}.dump()));
    EXPECT_EQ(r.status, 200) << r.body;
    return json::parse(r.body);
}

// Chat template and directive wording, copied out by hand.
const std::string kChatHead = "Keep it short! Privacy policy: ";
const std::string kChatMid = ". Users want to know more about how this rating is justified in the privacy policy. "
                             "When answering the questions, focus on the given topic of the rating. Keep it short! ";
const std::map<std::string, std::string> kLengthText = {
    {"short", "Answer in at most 3 sentences."},
    {"medium", "Answer in at most 6 sentences."},
    {"long", "Answer thoroughly in up to 12 sentences."}};
const std::map<std::string, std::string> kComplexityText = {
    {"no_prior", "Explain for a reader with no technical or legal background."},
    {"basic", "Assume the reader knows basic data protection concepts."},
    {"expert", "Assume the reader is a data protection expert and use precise legal and technical terms."}};

std::string replace_once(std::string s, const std::string& needle, const std::string& with) {
    auto pos = s.find(needle);
    if (pos != std::string::npos) {
        s.replace(pos, needle.size(), with);
    }
    return s;
}

struct Bookstore {
    std::string domain;
    double average;
};

// Averages worked out by hand from the scripted scores.
const std::vector<Bookstore> kBookstoreOrder = {{"novel-nook.test", 28.0 / 7},
                                                {"pageturner-books.test", 31.0 / 8},
                                                {"chapterhouse-shop.test", 18.0 / 6},
                                                {"inkwell-readers.test", 18.0 / 8}};

std::string bookstore_run(testsupport::FixtureServer& server, std::vector<std::string>* answers) {
    ServiceConfig config;
    config.mock = true;
    config.mock_scenario_dir = testsupport::fixture_dir() / "scenarios" / "bookstores";
    config.acquisition.host_overrides = server.host_overrides();
    testsupport::FakeClock clock;
    auto engine = Engine::build(config, {nullptr, nullptr, std::make_shared<Store>(":memory:"), clock.clock()});
    ApiRouter router(engine);

    const auto manifest = json::parse(testsupport::read_file(testsupport::fixture_dir() / "sites" / "manifest.json"));
    std::vector<DomainResult> results;
    for (const auto& site : manifest.at("sites")) {
        if (site.value("group", "") != "bookstore") {
            continue;
        }
        assess(router, site.at("page_url").get<std::string>());
        results.push_back(engine.cache->get_or_assess(site.at("page_url").get<std::string>()));
        auto chat = router.handle(request("POST", "/chat",
                                          json{{"domain", results.back().domain}, {"question", "How long is my data kept?"}}.dump()));
        EXPECT_EQ(chat.status, 200) << chat.body;
        if (answers) {
            answers->push_back(chat.body);
        }
    }
    EXPECT_EQ(results.size(), 4u);
    EXPECT_EQ(engine.mock->call_count(ModelTier::Assessment), 8u);
    return ranking_report(results);
}

} // namespace

TEST(ServiceAcceptance, CacheDeduplication) {
    {
        testsupport::TestEngine t;
        add_shop(t);
        ApiRouter router(t.engine);
        const auto first = assess(router, "http://shop.test/");
        const auto second = assess(router, "http://shop.test/account?x=1");
        EXPECT_EQ(first, second);
        EXPECT_EQ(t.mock->call_count(ModelTier::Assessment), 1u);
    }
    {
        testsupport::TestEngine t;
        testsupport::add_site(*t.fetcher, "shop.test", testsupport::policy_text(150, "ShopPolicy"));
        t.mock->set_responder([](const PromptRequest& r) -> std::optional<std::string> {
            if (r.tier != ModelTier::Assessment) {
                return std::nullopt;
            }
            std::this_thread::sleep_for(std::chrono::milliseconds(300));
            return testsupport::assessment_reply(kShopScores);
        });
        HttpService service(t.engine);
        const int port = service.bind("127.0.0.1", 0);
        ASSERT_GT(port, 0);
        std::thread server([&] { service.serve(); });
        std::vector<std::string> bodies(2);
        std::vector<int> statuses(2, 0);
        {
            std::vector<std::jthread> clients;
            for (int i = 0; i < 2; ++i) {
                clients.emplace_back([&, i] {
                    httplib::Client client("127.0.0.1", port);
                    client.set_read_timeout(10, 0);
                    for (int attempt = 0; attempt < 50; ++attempt) {
                        if (auto res = client.Post("/assess", R"({"page_url":"http://shop.test/"})", "application/json")) {
                            statuses[i] = res->status;
                            bodies[i] = res->body;
                            return;
                        }
                        std::this_thread::sleep_for(std::chrono::milliseconds(10));
                    }
                });
            }
        }
        service.stop();
        server.join();
        EXPECT_EQ(statuses, (std::vector<int>{200, 200}));
        EXPECT_EQ(bodies[0], bodies[1]);
        EXPECT_EQ(json::parse(bodies[0])["overall_color"], "yellow");
        EXPECT_EQ(t.mock->call_count(ModelTier::Assessment), 1u);
    }
}

TEST(ServiceAcceptance, SettingsPropagation) {
    testsupport::TestEngine t;
    add_shop(t);
    t.mock->script_contains("| Rating:", ModelTier::Assessment, "answer");
    t.mock->script_contains("three questions", ModelTier::Lightweight, "1. A?\n2. B?\n3. C?");
    ApiRouter router(t.engine);
    assess(router, "http://shop.test/");
    const auto policy = t.engine.store->get_policy("shop.test")->document.text;
    std::string rating;
    for (const auto& [name, score] : kShopScores) {
        rating += (rating.empty() ? "" : "\n\n") + name + ": " + std::to_string(score) + "/5\nJustification for " + name + ".";
    }

    std::set<std::string> stripped;
    int checked = 0;
    for (const auto& [length, length_text] : kLengthText) {
        for (const auto& [complexity, complexity_text] : kComplexityText) {
            ASSERT_EQ(router.handle(request("PUT", "/settings", json{{"length", length}, {"complexity", complexity}}.dump())).status,
                      200);
            router.handle(request("DELETE", "/history/shop.test"));
            t.mock->reset_transcript();
            auto r = router.handle(request("POST", "/chat", R"({"domain":"shop.test","question":"Is my data safe?"})"));
            ASSERT_EQ(r.status, 200) << r.body;
            std::string prompt;
            for (const auto& call : t.mock->transcript()) {
                if (call.request.tier == ModelTier::Assessment) {
                    prompt = call.request.system_prompt;
                }
            }
            const auto expected = kChatHead + policy + " | Rating: " + rating + kChatMid + complexity_text + " " + length_text;
            EXPECT_EQ(prompt, expected) << length << "/" << complexity;
            // Each directive appears exactly once, and the rest is identical across all nine.
            EXPECT_EQ(prompt.find(length_text), prompt.rfind(length_text));
            EXPECT_EQ(prompt.find(complexity_text), prompt.rfind(complexity_text));
            stripped.insert(replace_once(replace_once(prompt, length_text, "<L>"), complexity_text, "<C>"));
            ++checked;
        }
    }
    EXPECT_EQ(checked, 9);
    EXPECT_EQ(stripped.size(), 1u);
}

TEST(ServiceAcceptance, BookstoreRankingReplay) {
    testsupport::FixtureServer server(testsupport::fixture_dir() / "sites");
    std::vector<std::string> answers_first;
    std::vector<std::string> answers_second;
    const auto first = bookstore_run(server, &answers_first);
    const auto second = bookstore_run(server, &answers_second);
    EXPECT_EQ(first, second);
    EXPECT_EQ(answers_first, answers_second);

    std::vector<std::size_t> positions;
    for (const auto& b : kBookstoreOrder) {
        char avg[32];
        std::snprintf(avg, sizeof avg, "avg %.2f", b.average);
        const auto pos = first.find(b.domain);
        ASSERT_NE(pos, std::string::npos) << b.domain;
        EXPECT_NE(first.find(avg, pos), std::string::npos) << b.domain;
        positions.push_back(pos);
    }
    EXPECT_TRUE(std::is_sorted(positions.begin(), positions.end())) << first;
    EXPECT_TRUE(first.starts_with("Privacy policy comparison (4 sites)\n"));
    for (const auto& a : answers_first) {
        EXPECT_EQ(json::parse(a)["answer"], "The policy states that data is kept for as long as the account is active.");
        EXPECT_EQ(json::parse(a)["suggestions"].size(), 3u);
    }
}
