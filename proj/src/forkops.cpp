#include "forkpick/forkops.hpp"

#include <algorithm>
#include <set>

#include "forkpick/detail/pair_context.hpp"
#include "forkpick/errors.hpp"

namespace forkpick {

using detail::bit;
using detail::Mask;
using detail::PairContext;
using detail::RawOp;

int ForkOp::fork_side() const {
  if (kind != 2 && kind != 3) return 0;
  return w1.size() > w2.size() ? 1 : 2;
}

std::size_t CherryPickingSequence::ones() const {
  return static_cast<std::size_t>(std::count(counts.begin(), counts.end(), 1));
}

namespace detail {

bool raw_less(const RawOp& a, const RawOp& b) {
  if (a.kind != b.kind) return a.kind < b.kind;
  if (a.x != b.x) return a.x < b.x;
  const auto w1a = std::vector<int>(a.w1.begin(), a.w1.begin() + a.n1);
  const auto w1b = std::vector<int>(b.w1.begin(), b.w1.begin() + b.n1);
  if (w1a != w1b) return w1a < w1b;
  const auto w2a = std::vector<int>(a.w2.begin(), a.w2.begin() + a.n2);
  const auto w2b = std::vector<int>(b.w2.begin(), b.w2.begin() + b.n2);
  return w2a < w2b;
}

namespace {

RawOp make_raw(int kind, int x, int side, std::initializer_list<int> w1, std::initializer_list<int> w2) {
  RawOp op;
  op.kind = kind;
  op.x = x;
  op.side = side;
  op.n1 = static_cast<int>(w1.size());
  op.n2 = static_cast<int>(w2.size());
  std::copy(w1.begin(), w1.end(), op.w1.begin());
  std::copy(w2.begin(), w2.end(), op.w2.begin());
  return op;
}

}  // namespace

PairContext::PairContext(const PhyloTree& t1, const PhyloTree& t2) {
  taxa_ = t1.leaf_labels();
  if (t2.leaf_labels() != taxa_) throw InputError("the two trees have different leaf sets");
  if (taxa_.size() > static_cast<std::size_t>(kMaxTaxa)) throw InputError("too many leaves");
  trees_.emplace_back(t1, taxa_);
  trees_.emplace_back(t2, taxa_);
  full_ = taxa_.size() == 64 ? ~Mask{0} : (bit(static_cast<int>(taxa_.size())) - 1);
}

int PairContext::index_of(const std::string& label) const {
  auto it = std::lower_bound(taxa_.begin(), taxa_.end(), label);
  if (it == taxa_.end() || *it != label) return -1;
  return static_cast<int>(it - taxa_.begin());
}

std::vector<RawOp> PairContext::common_cherry_ops(const Views& views, Mask m) const {
  std::vector<RawOp> out;
  for (int x = 0; x < size(); ++x) {
    if (!(m & bit(x))) continue;
    const int c1 = views.v[0].partner(x);
    if (c1 >= 0 && c1 == views.v[1].partner(x)) out.push_back(make_raw(0, x, -1, {x, c1}, {x, c1}));
  }
  return out;
}

std::vector<RawOp> PairContext::ops(const Views& views, Mask m) const {
  std::vector<RawOp> out;
  for (int x = 0; x < size(); ++x) {
    if (!(m & bit(x))) continue;
    const int c[2] = {views.v[0].partner(x), views.v[1].partner(x)};
    if (c[0] >= 0 && c[0] == c[1]) out.push_back(make_raw(0, x, -1, {x, c[0]}, {x, c[0]}));
    if (c[0] >= 0 && c[1] >= 0 && c[0] != c[1]) out.push_back(make_raw(1, x, -1, {x, c[0]}, {x, c[1]}));
    for (int s = 0; s < 2; ++s) {
      const int co = c[1 - s];
      if (co < 0) continue;
      const auto tf = views.v[s].three_fork(x);
      if (tf[0] >= 0 && tf[0] == co) {
        const int p = tf[0], y = tf[1];
        out.push_back(s == 0 ? make_raw(2, x, 0, {p, x, y}, {x, p}) : make_raw(2, x, 1, {x, p}, {p, x, y}));
      }
      const auto ff = views.v[s].four_fork(x);
      if (ff[0] >= 0 && (co == ff[1] || co == ff[2])) {
        const int y = ff[0], p = co, q = co == ff[1] ? ff[2] : ff[1];
        out.push_back(s == 0 ? make_raw(3, x, 0, {y, x, p, q}, {x, p}) : make_raw(3, x, 1, {x, p}, {y, x, p, q}));
      }
    }
  }
  std::sort(out.begin(), out.end(), raw_less);
  return out;
}

ForkOp PairContext::to_public(const RawOp& op) const {
  ForkOp f;
  f.kind = op.kind;
  f.leaf = taxa_[op.x];
  for (int i = 0; i < op.n1; ++i) f.w1.push_back(taxa_[op.w1[i]]);
  for (int i = 0; i < op.n2; ++i) f.w2.push_back(taxa_[op.w2[i]]);
  return f;
}

std::optional<RawOp> PairContext::to_raw(const ForkOp& f) const {
  if (f.kind < 0 || f.kind > 3 || f.w1.size() > 4 || f.w2.size() > 4) return std::nullopt;
  RawOp op;
  op.kind = f.kind;
  op.x = index_of(f.leaf);
  if (op.x < 0) return std::nullopt;
  op.n1 = static_cast<int>(f.w1.size());
  op.n2 = static_cast<int>(f.w2.size());
  for (int i = 0; i < op.n1; ++i)
    if ((op.w1[i] = index_of(f.w1[i])) < 0) return std::nullopt;
  for (int i = 0; i < op.n2; ++i)
    if ((op.w2[i] = index_of(f.w2[i])) < 0) return std::nullopt;
  if (op.kind <= 1) {
    if (op.n1 != 2 || op.n2 != 2) return std::nullopt;
  } else {
    const int fork_len = op.kind == 2 ? 3 : 4;
    if (op.n1 == fork_len && op.n2 == 2) {
      op.side = 0;
    } else if (op.n2 == fork_len && op.n1 == 2) {
      op.side = 1;
    } else {
      return std::nullopt;
    }
  }
  return op;
}

}  // namespace detail

namespace {

std::string pattern_name(int kind) {
  switch (kind) {
    case 0: return "common cherry {x,y}";
    case 1: return "cherries {x,p} and {x,q} with p != q";
    case 2: return "3-fork (p,(x,y)) with cherry {x,p} in the other tree";
    case 3: return "4-fork ((y,x),(p,q)) with cherry {x,p} in the other tree";
    default: return "unknown operation kind";
  }
}

std::string op_name(const ForkOp& op) { return "o" + std::to_string(op.kind) + "(" + op.leaf + ")"; }

// Finds `op` among the operations applicable on the restriction to m.
std::optional<RawOp> match(const PairContext& ctx, const PairContext::Views& views, Mask m, const ForkOp& op) {
  auto raw = ctx.to_raw(op);
  if (!raw || !(m & bit(raw->x))) return std::nullopt;
  const auto all = ctx.ops(views, m);
  if (std::find(all.begin(), all.end(), *raw) == all.end()) return std::nullopt;
  return raw;
}

Verdict special_verdict(const PairContext& ctx, Mask start, std::span<const ForkOp> ops, const SpecialOptions& opt) {
  const int n = detail::popcount(start);
  const auto l = static_cast<int>(ops.size());
  if (n < 3) return Verdict::fail("special sequence needs at least three leaves");
  if (l < 1 || l > n - 2) return Verdict::fail("special sequence length " + std::to_string(l) + " outside [1, n-2]");
  Mask m = start;
  std::vector<RawOp> raws;
  for (int i = 0; i < l; ++i) {
    const auto views = ctx.views(m);
    const auto raw = match(ctx, views, m, ops[i]);
    if (!raw) {
      return Verdict::fail("operation " + std::to_string(i + 1) + " " + op_name(ops[i]) +
                           " is not applicable: needs " + pattern_name(ops[i].kind));
    }
    if (i + 1 < l) {
      if (raw->kind != 2 && raw->kind != 3)
        return Verdict::fail("fork tree: operation " + std::to_string(i + 1) + " is not of kind 2 or 3");
      if (i > 0 && raw->side != raws[0].side)
        return Verdict::fail("fork tree: operation " + std::to_string(i + 1) + " takes its fork from the other tree");
    } else if (raw->kind != 1) {
      return Verdict::fail("last operation is not of kind 1");
    }
    raws.push_back(*raw);
    m &= ~bit(raw->x);
  }
  if (l == 1) return Verdict::pass();

  const RawOp& prev = raws[l - 2];
  const RawOp& last = raws[l - 1];
  const int side = raws[0].side;
  if (prev.kind != 2) return Verdict::fail("final pair: last-but-one operation is not of kind 2");
  const int p = prev.fork()[0];
  if (prev.fork()[2] != last.x)
    return Verdict::fail("final pair: kind-2 fork (p,(x_{l-1},x_l)) does not contain the kind-1 leaf");
  const auto& star_cherry = side == 0 ? last.w1 : last.w2;
  const auto& other_cherry = side == 0 ? last.w2 : last.w1;
  if (star_cherry[1] != p) return Verdict::fail("final pair: kind-1 cherry in the fork tree is not {p,x_l}");
  if (other_cherry[1] == p) return Verdict::fail("final pair: p and q coincide");

  if (l > 2 && opt.lca_rule == LcaRule::nested) {
    const Mask scope = opt.lca_tree == LcaTree::full ? ctx.full() : start;
    const auto view = ctx.tree(side).view(scope);
    const Mask below = view.cluster(view.lca(bit(prev.x) | bit(last.x)));
    for (int i = 0; i + 2 < l; ++i) {
      if (!(below & bit(raws[i].x)))
        return Verdict::fail("lca condition: leaf " + ctx.taxa()[raws[i].x] + " is not below lca(" +
                             ctx.taxa()[prev.x] + "," + ctx.taxa()[last.x] + ") in the fork tree");
    }
  }
  return Verdict::pass();
}

}  // namespace

std::vector<ForkOp> applicable_ops(const PhyloTree& t1, const PhyloTree& t2) {
  const PairContext ctx(t1, t2);
  std::vector<ForkOp> out;
  if (ctx.size() < 2) return out;
  for (const auto& raw : ctx.ops(ctx.views(ctx.full()), ctx.full())) out.push_back(ctx.to_public(raw));
  std::sort(out.begin(), out.end());
  return out;
}

std::pair<PhyloTree, PhyloTree> apply_op(const PhyloTree& t1, const PhyloTree& t2, const ForkOp& op) {
  const PairContext ctx(t1, t2);
  if (ctx.size() < 2) throw InputError("cannot apply an operation to single-leaf trees");
  if (!match(ctx, ctx.views(ctx.full()), ctx.full(), op))
    throw InputError("operation " + op_name(op) + " does not match: needs " + pattern_name(op.kind));
  std::vector<std::string> keep;
  for (const auto& l : ctx.taxa())
    if (l != op.leaf) keep.push_back(l);
  return {restrict_to(t1, keep), restrict_to(t2, keep)};
}

Verdict check_special_sequence(const PhyloTree& t1, const PhyloTree& t2, std::span<const ForkOp> ops,
                               const SpecialOptions& options) {
  const PairContext ctx(t1, t2);
  return special_verdict(ctx, ctx.full(), ops, options);
}

std::optional<std::vector<Block>> decompose(std::span<const ForkOp> ops) {
  std::vector<Block> blocks;
  std::size_t i = 0;
  while (true) {
    std::size_t j = i;
    while (j < ops.size() && ops[j].kind == 0) ++j;
    blocks.push_back({false, i, j});
    if (j == ops.size()) break;
    std::size_t k = j;
    while (k < ops.size() && (ops[k].kind == 2 || ops[k].kind == 3)) ++k;
    if (k == ops.size() || ops[k].kind != 1) return std::nullopt;
    blocks.push_back({true, j, k + 1});
    i = k + 1;
  }
  return blocks;
}

ForkPickingSequence make_fork_picking_sequence(std::vector<ForkOp> ops) {
  auto blocks = decompose(ops);
  if (!blocks) throw InputError("operation list has no block decomposition");
  return {std::move(ops), std::move(*blocks)};
}

Verdict check_fork_picking_sequence(const PhyloTree& t1, const PhyloTree& t2, const ForkPickingSequence& seq,
                                    const SpecialOptions& options) {
  const PairContext ctx(t1, t2);
  const auto n = static_cast<std::size_t>(ctx.size());
  if (n < 2) return Verdict::fail("trees need at least two leaves");
  if (seq.ops.size() != n - 1)
    return Verdict::fail("sequence has " + std::to_string(seq.ops.size()) + " operations, expected " +
                         std::to_string(n - 1));
  std::set<std::string> leaves;
  for (const auto& op : seq.ops)
    if (!leaves.insert(op.leaf).second) return Verdict::fail("leaf " + op.leaf + " is removed twice");
  const auto blocks = decompose(seq.ops);
  if (!blocks) return Verdict::fail("a run of kind-2/3 operations is not closed by a kind-1 operation");
  if (*blocks != seq.blocks) return Verdict::fail("stored block decomposition does not match the operations");
  if (blocks->back().begin == blocks->back().end) return Verdict::fail("final block C_{k+1} is empty");

  Mask m = ctx.full();
  for (std::size_t b = 0; b < blocks->size(); ++b) {
    const Block& blk = (*blocks)[b];
    const std::span<const ForkOp> part(seq.ops.data() + blk.begin, blk.end - blk.begin);
    if (blk.special) {
      const auto v = special_verdict(ctx, m, part, options);
      if (!v) return Verdict::fail("block S_" + std::to_string(b / 2 + 1) + ": " + v.reason);
      for (const auto& op : part) m &= ~bit(ctx.index_of(op.leaf));
      continue;
    }
    for (const auto& op : part) {
      if (!match(ctx, ctx.views(m), m, op))
        return Verdict::fail("block C_" + std::to_string(b / 2 + 1) + ": " + op_name(op) + " is not applicable");
      m &= ~bit(ctx.index_of(op.leaf));
    }
  }
  return Verdict::pass();
}

Verdict check_cherry_picking_sequence(const PhyloTree& t1, const PhyloTree& t2, const CherryPickingSequence& cps) {
  const PairContext ctx(t1, t2);
  const auto n = static_cast<std::size_t>(ctx.size());
  if (n < 2) return Verdict::fail("trees need at least two leaves");
  if (cps.order.size() != n - 1 || cps.counts.size() != n - 1)
    return Verdict::fail("sequence must list " + std::to_string(n - 1) + " leaves and counts");
  Mask m = ctx.full();
  for (std::size_t i = 0; i < cps.order.size(); ++i) {
    const std::string step = "step " + std::to_string(i + 1) + ": ";
    const int x = ctx.index_of(cps.order[i]);
    if (x < 0 || !(m & bit(x))) return Verdict::fail(step + "leaf " + cps.order[i] + " is unknown or already removed");
    const auto views = ctx.views(m);
    const int p1 = views.v[0].partner(x), p2 = views.v[1].partner(x);
    if (p1 < 0) return Verdict::fail(step + cps.order[i] + " is not in a cherry of the first tree");
    if (p2 < 0) return Verdict::fail(step + cps.order[i] + " is not in a cherry of the second tree");
    const int expected = p1 != p2 ? 1 : 0;
    if (cps.counts[i] != expected)
      return Verdict::fail(step + "count is " + std::to_string(cps.counts[i]) + ", expected " + std::to_string(expected));
    m &= ~bit(x);
  }
  return Verdict::pass();
}

CherryPickingSequence fork_to_cherry(const ForkPickingSequence& seq) {
  CherryPickingSequence cps;
  for (const auto& op : seq.ops) {
    cps.order.push_back(op.leaf);
    cps.counts.push_back(op.kind == 0 ? 0 : 1);
  }
  return cps;
}

ForkPickingSequence cherry_to_fork(const PhyloTree& t1, const PhyloTree& t2, const CherryPickingSequence& cps) {
  const auto v = check_cherry_picking_sequence(t1, t2, cps);
  if (!v) throw InputError("invalid cherry-picking sequence: " + v.reason);
  const PairContext ctx(t1, t2);
  Mask m = ctx.full();
  std::vector<ForkOp> ops;
  for (const auto& leaf : cps.order) {
    const int x = ctx.index_of(leaf);
    const auto views = ctx.views(m);
    const int p1 = views.v[0].partner(x), p2 = views.v[1].partner(x);
    ForkOp op;
    op.kind = p1 == p2 ? 0 : 1;
    op.leaf = leaf;
    op.w1 = {leaf, ctx.taxa()[p1]};
    op.w2 = {leaf, ctx.taxa()[p2]};
    ops.push_back(std::move(op));
    m &= ~bit(x);
  }
  return make_fork_picking_sequence(std::move(ops));
}

}  // namespace forkpick
