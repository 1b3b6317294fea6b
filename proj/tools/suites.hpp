#pragma once

#include <map>
#include <string>
#include <vector>

#include "report.hpp"
#include "spintorsion/geometry.hpp"

namespace spt::tool {

const std::vector<std::string>& suite_names();  // without "all"

Report suite_clifford(const RunConfig& cfg);
Report suite_conjugation(const RunConfig& cfg);
Report suite_fierz(const RunConfig& cfg);
Report suite_admissibility(const RunConfig& cfg);
Report suite_bianchi(const RunConfig& cfg);
Report suite_brane(const RunConfig& cfg);
Report suite_jacobi(const RunConfig& cfg);

// "all" runs every suite concurrently; unknown names throw ConfigError
Report run_suite(const RunConfig& cfg, const std::string& name);

Report cmd_tables(const RunConfig& cfg);
Report cmd_iib_truncations(const RunConfig& cfg);
Report cmd_brane(const RunConfig& cfg);

// Reference values and comparisons shared with the acceptance runner ------

// Rows of the twisted table that differ from the hard-coded j lists.
std::vector<std::string> twisted_table_diff(const ChargeConjugation& conj);

// Kernel of Π_{ij,w} named relative to w: "S^-w+S^w", "graph(-w)" for {(η, -wγ*η)}, "0", "other".
std::string describe_kernel(const GammaRep& rep, int w, const std::vector<QVec>& span);
struct KernelRow {
    int i = 0, j = 0, w = 1;
    std::string printed;  // empty when the pair is not listed
    std::string measured;
    std::size_t dim = 0;
};
std::vector<KernelRow> kernel_table(const GammaRep& rep);

// Δ_k and the pairing chirality against the printed row for D mod 8 (Riemannian even D).
std::vector<std::string> symmetry_table_diff(const ChargeConjugation& conj);

// Printed field content killed by C ⊗ τ_j for j = 0, 1, 3.
const std::map<int, std::vector<std::string>>& iib_printed_killed();

BraneSpec custom_brane(int p, int d, int delta);
BraneSpec brane_spec(const RunConfig& cfg);

}  // namespace spt::tool
