#pragma once

#include <string>
#include <utility>
#include <vector>

#include "easic/netlist.hpp"

namespace easic {

struct DelayModel;

struct PathElement {
  InstId inst;
  double delay;  // ns
};

/// Ordered chain of instances from a start point (PI, FF or any element of an
/// ingested report) to an end point, with one arc delay per element.
struct TimedPath {
  std::vector<PathElement> elements;
  double total = 0;

  void recompute_total();
  bool contains(InstId inst) const;
};

/// Path as read from a report: instance names and delays before resolution.
struct RawPath {
  std::vector<std::pair<std::string, double>> elements;
};

/// Ascending by total; ties by the element hash sequence.
void sort_paths(std::vector<TimedPath>& paths, const Netlist& netlist);

/// Up to `cap` worst paths per end point (PO or FF data input), delays from the
/// model's average arcs. Start points are PIs, FF outputs and tie cells.
std::vector<TimedPath> enumerate_paths(const Netlist& netlist, const DelayModel& model, size_t cap = 64);

/// Splices out BUF/IBUF/OBUF instances, preserving function.
Netlist remove_buffers(const Netlist& netlist);

struct Preprocessed {
  Netlist netlist;
  std::vector<TimedPath> paths;  // ascending; back() is the critical path
};

/// Buffer removal plus path resolution. Raw paths lose their buffer elements
/// and are re-targeted to the buffer-free netlist; when `raw` is empty the
/// paths are enumerated instead.
Preprocessed preprocess(const Netlist& netlist, const std::vector<RawPath>& raw, const DelayModel& model,
                        size_t cap = 64);

}  // namespace easic
