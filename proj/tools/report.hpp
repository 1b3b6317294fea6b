#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

namespace spt::tool {

inline constexpr const char* kToolVersion = "0.4.0";

// Bad flags, schema violations, unrealizable requests: exit code 2.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    int t = 0, s = 4;
    std::optional<int> delta0;  // all realizable choices when unset
    std::optional<int> twist;   // doubled bundle with C ⊗ τ_i
    std::uint64_t seed = 1;
    std::string suite = "all";
    std::string preset = "m5";  // brane: m5 | printed | custom
    std::optional<int> p, d, delta;  // custom brane, δ1 = δ2 = delta
    std::string out;
    std::string format = "json";

    int D() const { return t + s; }
    nlohmann::json to_json() const;
    static RunConfig from_json(const nlohmann::json& j);  // throws ConfigError
    void validate() const;
};

struct CheckRecord {
    std::string id;       // suite.topic.detail, unique per report
    std::string anchor;   // module and statement the check exercises
    bool pass = false;
    double residual = 0;  // max abs residual for float checks, mismatch count for exact ones
    std::string witness;  // first failing instance or the measured value
};

class Report {
public:
    void add(CheckRecord r);
    // exact check: passes iff nothing mismatched
    void exact(std::string id, std::string anchor, std::size_t mismatches, std::string witness = {});
    void within(std::string id, std::string anchor, double residual, double tol, std::string witness = {});
    void merge(Report other);

    const std::vector<CheckRecord>& records() const { return records_; }
    std::vector<CheckRecord> sorted() const;  // by id; throws on duplicates
    std::size_t failures() const;

    nlohmann::json config;   // echo of the effective RunConfig
    nlohmann::json extra;    // structured payload (tables, truncation rows)

    // One record per line, then the payload and a summary block.
    std::string to_jsonl() const;
    std::string to_csv() const;

private:
    std::vector<CheckRecord> records_;
};

// First n items of a mismatch list as a witness string.
std::string join(const std::vector<std::string>& items, std::size_t n = 3);
std::string ints(const std::vector<int>& v);

}  // namespace spt::tool
