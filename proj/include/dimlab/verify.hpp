#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace dimlab::verify {

struct Check {
    std::string name;
    bool passed = false;
    std::string detail;
};

struct SuiteResult {
    std::string suite;
    std::vector<Check> checks;
    bool passed() const;
};

// chain, carpets, sequence, dp, sharpness, distortion, classification, capacity, percolation
const std::vector<std::string>& suite_names();

// Throws ParameterError for an unknown name; "all" runs every suite.
std::vector<SuiteResult> run(const std::string& name);

nlohmann::json to_json(const SuiteResult& r);

}  // namespace dimlab::verify
