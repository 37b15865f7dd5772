#include "lanedet/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <unordered_map>

namespace lanedet {

NmiNorm parse_nmi_norm(const std::string& s) {
  if (s == "sqrt") return NmiNorm::Sqrt;
  if (s == "max") return NmiNorm::Max;
  if (s == "mean") return NmiNorm::Mean;
  throw std::invalid_argument("nmi norm must be sqrt, max or mean, got '" + s + "'");
}

std::string to_string(NmiNorm norm) {
  switch (norm) {
    case NmiNorm::Sqrt: return "sqrt";
    case NmiNorm::Max: return "max";
    case NmiNorm::Mean: return "mean";
  }
  throw std::logic_error("unreachable");
}

namespace {

// Maps arbitrary labels to compact indices and returns per-index counts.
std::vector<long> compact(const std::vector<std::int32_t>& labels,
                          std::vector<std::int32_t>& index) {
  std::unordered_map<std::int32_t, std::int32_t> remap;
  std::vector<long> counts;
  index.resize(labels.size());
  for (std::size_t k = 0; k < labels.size(); ++k) {
    const auto [it, fresh] = remap.emplace(labels[k], static_cast<std::int32_t>(counts.size()));
    if (fresh) counts.push_back(0);
    index[k] = it->second;
    ++counts[it->second];
  }
  return counts;
}

// Entropy from counts; sorting first makes the sum independent of label
// order.
double entropy(std::vector<long> counts, double n) {
  std::sort(counts.begin(), counts.end());
  double h = 0.0;
  for (const long c : counts) {
    const double p = c / n;
    h -= p * std::log(p);
  }
  return h;
}

}  // namespace

double nmi(const std::vector<std::int32_t>& a, const std::vector<std::int32_t>& b,
           NmiNorm norm) {
  if (a.size() != b.size()) throw std::invalid_argument("nmi: label vectors differ in length");
  if (a.empty()) throw std::invalid_argument("nmi: empty labeling");
  const double n = static_cast<double>(a.size());

  std::vector<std::int32_t> ia, ib;
  const std::vector<long> counts_a = compact(a, ia);
  const std::vector<long> counts_b = compact(b, ib);

  const bool single_a = counts_a.size() == 1;
  const bool single_b = counts_b.size() == 1;
  if (single_a && single_b) return 1.0;  // identical trivial partitions
  if (single_a || single_b) return 0.0;  // one side carries no information

  std::unordered_map<std::uint64_t, long> joint;
  joint.reserve(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) {
    ++joint[(static_cast<std::uint64_t>(static_cast<std::uint32_t>(ia[k])) << 32) |
            static_cast<std::uint32_t>(ib[k])];
  }

  // Mutual information, with terms sorted so the addition order depends
  // only on the term values: exact symmetry and relabeling invariance.
  std::vector<double> terms;
  terms.reserve(joint.size());
  for (const auto& [key, c] : joint) {
    const long ca = counts_a[key >> 32];
    const long cb = counts_b[key & 0xffffffffu];
    terms.push_back(c / n * std::log(n * c / (static_cast<double>(ca) * cb)));
  }
  std::sort(terms.begin(), terms.end());
  const double info = std::accumulate(terms.begin(), terms.end(), 0.0);

  const double ha = entropy(counts_a, n);
  const double hb = entropy(counts_b, n);
  double denom = 0.0;
  switch (norm) {
    case NmiNorm::Sqrt: denom = std::sqrt(ha * hb); break;
    case NmiNorm::Max: denom = std::max(ha, hb); break;
    case NmiNorm::Mean: denom = (ha + hb) / 2.0; break;
  }
  return std::clamp(info / denom, 0.0, 1.0);
}

double mean_nmi(const std::vector<double>& per_timestep) {
  if (per_timestep.empty()) throw std::invalid_argument("mean_nmi: no scores");
  return std::accumulate(per_timestep.begin(), per_timestep.end(), 0.0) /
         static_cast<double>(per_timestep.size());
}

}  // namespace lanedet
