#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace lanedet {

enum class NmiNorm { Sqrt, Max, Mean };

NmiNorm parse_nmi_norm(const std::string& s);
std::string to_string(NmiNorm norm);

// Normalized mutual information between two labelings of the same node
// sequence (entries pair up by position; natural logarithms). Degenerate
// cases: two single-cluster labelings score 1, and if exactly one side is
// single-cluster the score is 0. The result is clipped to [0, 1].
//
// Summation orders are canonicalized (terms sorted before adding), so the
// value is bit-for-bit symmetric in its arguments and invariant under
// relabeling.
double nmi(const std::vector<std::int32_t>& a, const std::vector<std::int32_t>& b,
           NmiNorm norm = NmiNorm::Sqrt);

// Arithmetic mean of per-timestep scores; empty input is an error.
double mean_nmi(const std::vector<double>& per_timestep);

}  // namespace lanedet
