#include "nsdist/trace.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace nsdist {

double RunTrace::output_gap(std::size_t sample) const {
  if (!optimum) {
    throw std::logic_error("RunTrace: no optimum value attached");
  }
  return samples.at(sample).output_value - *optimum;
}

double RunTrace::node_gap(std::size_t sample, std::size_t slot) const {
  if (!optimum) {
    throw std::logic_error("RunTrace: no optimum value attached");
  }
  return samples.at(sample).node_values.at(slot) - *optimum;
}

void write_trace_csv(const RunTrace& trace, std::ostream& out) {
  out << "time,node,gap,consensus,subgrads,messages\n";
  char line[256];
  for (const auto& s : trace.samples) {
    for (std::size_t slot = 0; slot < trace.recorded_nodes.size(); ++slot) {
      const double gap = trace.optimum ? s.node_values[slot] - *trace.optimum : std::nan("");
      std::snprintf(line, sizeof line, "%.17g,%zu,%.17g,%.17g,%llu,%llu\n", s.time,
                    trace.recorded_nodes[slot] + 1, gap, s.consensus,
                    static_cast<unsigned long long>(s.subgradients),
                    static_cast<unsigned long long>(s.messages));
      out << line;
    }
  }
}

std::string digest_of(const std::string& text) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char out[17];
  std::snprintf(out, sizeof out, "%016llx", static_cast<unsigned long long>(h));
  return out;
}

}  // namespace nsdist
