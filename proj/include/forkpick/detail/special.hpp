#pragma once

#include <map>
#include <unordered_set>
#include <vector>

#include "forkpick/detail/pair_context.hpp"

namespace forkpick::detail {

// Enumerates special sequences starting from the restriction to `start`
// whose leaves all lie in `allowed`. Keeps the first sequence found for each
// set of removed leaves.
class SpecialFinder {
 public:
  SpecialFinder(const PairContext& ctx, const SpecialOptions& options, Mask start, Mask allowed);

  const std::map<Mask, std::vector<RawOp>>& found() const { return found_; }

 private:
  void record(Mask removed, std::vector<RawOp> ops);
  void dfs(int side, Mask m, std::vector<RawOp>& prefix);
  void close(int side, Mask m, const PairContext::Views& views, std::vector<RawOp>& prefix);

  const PairContext& ctx_;
  SpecialOptions options_;
  Mask start_;
  Mask allowed_;
  std::unordered_set<Mask> visited_;
  std::map<Mask, std::vector<RawOp>> found_;
};

}  // namespace forkpick::detail
