#pragma once

#include "policylens/store.hpp"

#include <nlohmann/json.hpp>

#include <string>
#include <vector>

namespace policylens {

/// Wire form of an assessment result (POST /assess, CLI --json).
nlohmann::json domain_result_json(const DomainResult& result);

/// Side-by-side comparison of several sites: best average first, failures
/// last, ties broken by domain name. Contains no timestamps, so identical
/// inputs give identical bytes.
std::string ranking_report(std::vector<DomainResult> results);

} // namespace policylens
