#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace nsdist {

struct TraceSample {
  std::size_t iteration = 0;
  double time = 0.0;
  // fbar at the output of each recorded node
  std::vector<double> node_values;
  // fbar at the algorithm's reported output (x_t, averaged iterate, theta-bar)
  double output_value = 0.0;
  double consensus = 0.0;
  std::uint64_t subgradients = 0;
  std::uint64_t messages = 0;
};

struct RunTrace {
  std::string algorithm;
  std::uint64_t seed = 0;
  std::string config_digest;
  std::vector<std::size_t> recorded_nodes;
  std::optional<double> optimum;
  std::vector<TraceSample> samples;

  double total_time() const { return samples.empty() ? 0.0 : samples.back().time; }
  /// Throws std::logic_error when no optimum is attached.
  double output_gap(std::size_t sample) const;
  double node_gap(std::size_t sample, std::size_t slot) const;
};

/// CSV with header `time,node,gap,consensus,subgrads,messages`, one row per
/// (sample, recorded node). Nodes are 1-indexed; gap is `nan` without an optimum.
void write_trace_csv(const RunTrace& trace, std::ostream& out);

/// 64-bit FNV-1a of `text`, as 16 hex digits.
std::string digest_of(const std::string& text);

}  // namespace nsdist
