#include "policylens/store.hpp"

#include <stdexcept>

namespace policylens {

namespace {

DomainStatus from_acquisition(AcquisitionStatus s) {
    switch (s) {
    case AcquisitionStatus::Ok: return DomainStatus::Ok;
    case AcquisitionStatus::LinkNotFound: return DomainStatus::LinkNotFound;
    case AcquisitionStatus::FetchBlocked: return DomainStatus::FetchBlocked;
    case AcquisitionStatus::TooShort: return DomainStatus::TooShort;
    }
    return DomainStatus::LinkNotFound;
}

std::optional<DomainStatus> domain_status_from_string(std::string_view text) {
    for (auto s : {DomainStatus::Ok, DomainStatus::LinkNotFound, DomainStatus::FetchBlocked, DomainStatus::TooShort,
                   DomainStatus::AssessmentUnavailable}) {
        if (to_string(s) == text) {
            return s;
        }
    }
    return std::nullopt;
}

} // namespace

std::string_view to_string(DomainStatus status) {
    switch (status) {
    case DomainStatus::Ok: return "ok";
    case DomainStatus::LinkNotFound: return "link_not_found";
    case DomainStatus::FetchBlocked: return "fetch_blocked";
    case DomainStatus::TooShort: return "too_short";
    case DomainStatus::AssessmentUnavailable: return "assessment_unavailable";
    }
    return "link_not_found";
}

AssessmentCache::AssessmentCache(std::shared_ptr<Store> store, std::shared_ptr<PolicyAcquirer> acquirer,
                                 std::shared_ptr<Assessor> assessor, Clock clock, std::chrono::seconds negative_ttl)
    : store_(std::move(store)), acquirer_(std::move(acquirer)), assessor_(std::move(assessor)),
      clock_(std::move(clock)), negative_ttl_(negative_ttl) {}

std::size_t AssessmentCache::pipeline_runs() const {
    std::lock_guard lock(inflight_mutex_);
    return runs_;
}

DomainResult AssessmentCache::get_or_assess(const std::string& page_url, const std::optional<std::string>& policy_url) {
    const auto url = parse_url(page_url);
    if (!url) {
        throw std::invalid_argument("page_url must be an absolute http(s) URL");
    }
    const auto domain = registrable_domain(url->host);
    return coalesced(domain, [&] { return run_pipeline(domain, url->str(), policy_url, false); });
}

std::optional<DomainResult> AssessmentCache::reassess(const std::string& domain) {
    const auto stored = store_->get_policy(domain);
    if (!stored) {
        return std::nullopt;
    }
    return coalesced(domain, [&] { return run_pipeline(domain, stored->page_url, std::nullopt, true); });
}

DomainResult AssessmentCache::coalesced(const std::string& domain, const std::function<DomainResult()>& work) {
    std::unique_lock lock(inflight_mutex_);
    if (auto it = inflight_.find(domain); it != inflight_.end()) {
        auto shared = it->second;
        lock.unlock();
        return shared.get();
    }
    std::promise<DomainResult> promise;
    inflight_.emplace(domain, promise.get_future().share());
    lock.unlock();

    try {
        auto result = work();
        promise.set_value(result);
        lock.lock();
        inflight_.erase(domain);
        return result;
    } catch (...) {
        promise.set_exception(std::current_exception());
        lock.lock();
        inflight_.erase(domain);
        throw;
    }
}

DomainResult AssessmentCache::run_pipeline(const std::string& domain, const std::string& page_url,
                                           const std::optional<std::string>& policy_url, bool force) {
    DomainResult result;
    result.domain = domain;

    const auto cached = store_->get_assessment(domain);
    auto stored_policy = store_->get_policy(domain);
    if (cached && !force) {
        result.status = DomainStatus::Ok;
        result.assessment = cached;
        result.truncated = cached->truncated;
        result.policy_word_count = stored_policy ? stored_policy->document.word_count : 0;
        result.from_cache = true;
        return result;
    }
    if (!force) {
        if (auto neg = store_->get_negative(domain); neg && neg->expires_at > clock_()) {
            result.status = domain_status_from_string(neg->status).value_or(DomainStatus::LinkNotFound);
            result.diagnostics.push_back(neg->diagnostic);
            result.from_cache = true;
            return result;
        }
    }

    {
        std::lock_guard lock(inflight_mutex_);
        ++runs_;
    }
    auto doc = acquirer_->acquire(page_url, policy_url ? std::optional<std::string_view>(*policy_url) : std::nullopt);
    if (!doc.ok()) {
        result.status = from_acquisition(doc.status);
        result.diagnostics.push_back(doc.diagnostic);
        if (!cached) {
            store_->put_policy(doc, page_url);
            store_->put_negative(domain, {std::string(to_string(result.status)), doc.diagnostic, clock_() + negative_ttl_});
        }
        return result;
    }

    const auto hash = content_hash(doc.text);
    result.policy_word_count = doc.word_count;
    if (force && cached && store_->assessment_policy_hash(domain) == hash) {
        result.status = DomainStatus::Ok;
        result.assessment = cached;
        result.truncated = cached->truncated;
        result.from_cache = true;
        result.diagnostics.push_back("policy text unchanged; kept existing assessment");
        return result;
    }

    store_->put_policy(doc, page_url);
    auto outcome = assessor_->assess_domain(doc);
    if (auto* unavailable = std::get_if<AssessmentUnavailable>(&outcome)) {
        result.status = DomainStatus::AssessmentUnavailable;
        result.diagnostics = unavailable->diagnostics;
        if (!cached) {
            store_->put_negative(domain, {std::string(to_string(result.status)),
                                          unavailable->diagnostics.empty() ? "" : unavailable->diagnostics.front(),
                                          clock_() + negative_ttl_});
        }
        return result;
    }
    auto& assessment = std::get<PolicyAssessment>(outcome);
    store_->put_assessment(assessment, hash);
    store_->clear_negative(domain);
    result.status = DomainStatus::Ok;
    result.truncated = assessment.truncated;
    result.diagnostics = assessment.warnings;
    result.assessment = std::move(assessment);
    return result;
}

} // namespace policylens
