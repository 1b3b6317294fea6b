#include "report.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace spt::tool {

using nlohmann::json;

json RunConfig::to_json() const {
    json j;
    j["signature"] = {t, s};
    j["delta0"] = delta0 ? json(*delta0) : json(nullptr);
    j["twist"] = twist ? json(*twist) : json(nullptr);
    j["seed"] = seed;
    j["suite"] = suite;
    json b;
    b["preset"] = preset;
    b["p"] = p ? json(*p) : json(nullptr);
    b["d"] = d ? json(*d) : json(nullptr);
    b["delta"] = delta ? json(*delta) : json(nullptr);
    j["brane"] = b;
    j["format"] = format;
    return j;
}

namespace {

template <class T>
std::optional<T> opt(const json& j, const char* key) {
    if (!j.contains(key) || j[key].is_null()) return std::nullopt;
    return j[key].get<T>();
}

}  // namespace

RunConfig RunConfig::from_json(const json& j) {
    static const std::set<std::string> keys = {"signature", "delta0", "twist", "seed", "suite",
                                               "brane",     "out",    "format"};
    if (!j.is_object()) throw ConfigError("config: top level must be an object");
    for (const auto& [k, v] : j.items())
        if (!keys.count(k)) throw ConfigError("config: unknown key '" + k + "'");
    RunConfig c;
    try {
        if (j.contains("signature")) {
            const auto& sig = j["signature"];
            if (!sig.is_array() || sig.size() != 2) throw ConfigError("config: signature must be [t, s]");
            c.t = sig[0].get<int>();
            c.s = sig[1].get<int>();
        }
        c.delta0 = opt<int>(j, "delta0");
        c.twist = opt<int>(j, "twist");
        if (auto s = opt<std::uint64_t>(j, "seed")) c.seed = *s;
        if (auto s = opt<std::string>(j, "suite")) c.suite = *s;
        if (auto s = opt<std::string>(j, "out")) c.out = *s;
        if (auto s = opt<std::string>(j, "format")) c.format = *s;
        if (j.contains("brane")) {
            const auto& b = j["brane"];
            if (!b.is_object()) throw ConfigError("config: brane must be an object");
            if (auto s = opt<std::string>(b, "preset")) c.preset = *s;
            c.p = opt<int>(b, "p");
            c.d = opt<int>(b, "d");
            c.delta = opt<int>(b, "delta");
        }
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    c.validate();
    return c;
}

void RunConfig::validate() const {
    if (t < 0 || s < 0 || D() < 1 || D() > 12) throw ConfigError("signature: need t, s >= 0 and 1 <= t+s <= 12");
    if (delta0 && *delta0 != 1 && *delta0 != -1) throw ConfigError("delta0 must be + or -");
    if (twist && (*twist < 0 || *twist > 3)) throw ConfigError("twist must be 0..3");
    if (format != "json" && format != "csv") throw ConfigError("format must be json or csv");
    if (preset != "m5" && preset != "printed" && preset != "custom") throw ConfigError("preset must be m5, printed or custom");
    if (delta && *delta != 1 && *delta != -1) throw ConfigError("brane delta must be + or -");
}

void Report::add(CheckRecord r) {
    if (!r.pass && r.witness.empty()) r.witness = "residual " + std::to_string(r.residual);
    records_.push_back(std::move(r));
}

void Report::exact(std::string id, std::string anchor, std::size_t mismatches, std::string witness) {
    add({std::move(id), std::move(anchor), mismatches == 0, double(mismatches), std::move(witness)});
}

void Report::within(std::string id, std::string anchor, double residual, double tol, std::string witness) {
    // NaN fails
    add({std::move(id), std::move(anchor), residual <= tol, residual, std::move(witness)});
}

void Report::merge(Report other) {
    for (auto& r : other.records_) records_.push_back(std::move(r));
    if (!other.extra.is_null()) extra.update(other.extra);
}

std::vector<CheckRecord> Report::sorted() const {
    auto out = records_;
    std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
    for (std::size_t i = 1; i < out.size(); ++i)
        if (out[i].id == out[i - 1].id) throw std::logic_error("duplicate check id " + out[i].id);
    return out;
}

std::size_t Report::failures() const {
    return std::count_if(records_.begin(), records_.end(), [](const auto& r) { return !r.pass; });
}

std::string Report::to_jsonl() const {
    std::ostringstream os;
    for (const auto& r : sorted()) {
        json j;
        j["id"] = r.id;
        j["anchor"] = r.anchor;
        j["status"] = r.pass ? "pass" : "fail";
        j["residual"] = r.residual;
        j["witness"] = r.witness;
        os << j.dump() << '\n';
    }
    if (!extra.is_null()) os << json{{"data", extra}}.dump() << '\n';
    json s;
    s["checks"] = records_.size();
    s["passed"] = records_.size() - failures();
    s["failed"] = failures();
    json summary{{"summary", s}, {"version", kToolVersion}, {"config", config}};
    os << summary.dump() << '\n';
    return os.str();
}

namespace {

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
        if (c == '"') q += '"';
        q += c;
    }
    return q + '"';
}

}  // namespace

std::string Report::to_csv() const {
    std::ostringstream os;
    os << "id,anchor,status,residual,witness\n";
    for (const auto& r : sorted())
        os << csv_field(r.id) << ',' << csv_field(r.anchor) << ',' << (r.pass ? "pass" : "fail") << ','
           << json(r.residual).dump() << ',' << csv_field(r.witness) << '\n';
    os << "# checks=" << records_.size() << " passed=" << records_.size() - failures() << " failed=" << failures()
       << " version=" << kToolVersion << '\n';
    os << "# config=" << config.dump() << '\n';
    return os.str();
}

std::string join(const std::vector<std::string>& items, std::size_t n) {
    std::string s;
    for (std::size_t i = 0; i < items.size() && i < n; ++i) s += (i ? "; " : "") + items[i];
    if (items.size() > n) s += "; +" + std::to_string(items.size() - n) + " more";
    return s;
}

std::string ints(const std::vector<int>& v) {
    std::string s = "{";
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
    return s + "}";
}

}  // namespace spt::tool
