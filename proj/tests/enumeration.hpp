// Exhaustive enumeration of graph-language formulas over a small variable
// pool, with an independent fragment-membership oracle.
//
// The oracle computes, per descriptor, the set of member formulas inside the
// finite universe by the definitional construction: starting from the
// quantifier-free formulas it applies, block by block from the inside out,
//   - prefix steps  S ∪ { Qv φ : φ ∈ S }  (bounded, nested, or to fixpoint),
//   - closure under conjunction, disjunction, pool renamings of free
//     variables, with top/bottom adjoined,
// entirely as set operations over the enumerated universe. This is
// deliberately a different algorithm from the membership test in the library,
// which recurses over a single formula's structure.
//
// Renamings that would need a variable outside the pool (capture avoidance)
// leave the universe and are dropped; by construction every generator set is
// closed under pool renamings anyway, so this loses no members.
#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "fragcalc/formula.hpp"
#include "fragcalc/fragments.hpp"

namespace fragcalc::enumeration {

enum class Op : std::uint8_t { Top, Bot, Atom, Not, And, Or, Quant };

struct Entry {
  Op op;
  // Atom: a = atom index. Not: a = operand. And/Or: a, b = operands.
  // Quant: a = body, b = quant index (kind * pool size + variable index).
  std::int32_t a = -1;
  std::int32_t b = -1;
};

struct Atom {
  bool isEq = false;  // false: edge relation E, true: equality
  int v1 = 0, v2 = 0;
};

class FormulaUniverse {
 public:
  FormulaUniverse(std::vector<std::string> vars, std::size_t maxSize)
      : vars_(std::move(vars)), maxSize_(maxSize) {
    generate();
    indexNodes();
    computeFreeMasks();
    computeQuantParents();
    computeRenames();
  }

  std::size_t size() const { return entries_.size(); }

  FormulaPtr build(std::size_t id) const {
    const Entry& e = entries_[id];
    switch (e.op) {
      case Op::Top:
        return top();
      case Op::Bot:
        return bot();
      case Op::Atom: {
        const Atom& at = atoms_[e.a];
        TermPtr l = var(vars_[at.v1], "vertex");
        TermPtr r = var(vars_[at.v2], "vertex");
        return at.isEq ? eq(l, r) : rel("E", {l, r});
      }
      case Op::Not:
        return neg(build(e.a));
      case Op::And:
        return conj(build(e.a), build(e.b));
      case Op::Or:
        return disj(build(e.a), build(e.b));
      case Op::Quant: {
        int kind = e.b / static_cast<int>(vars_.size());
        int v = e.b % static_cast<int>(vars_.size());
        FormulaPtr body = build(e.a);
        return kind == 0 ? forall(vars_[v], "vertex", body) : exists(vars_[v], "vertex", body);
      }
    }
    return top();
  }

  /// Membership of every universe formula in the described fragment,
  /// computed by the definitional set construction.
  std::vector<char> oracleMembership(const FragmentDescriptor& desc) const {
    std::vector<char> cur = quantifierFreeSet();
    for (std::size_t bi = desc.blocks.size(); bi-- > 0;) {
      const QuantifierBlock& b = desc.blocks[bi];
      switch (b.mode) {
        case BlockMode::PrefixOnly:
          cur = prefixSteps(b, cur, b.bound);
          break;
        case BlockMode::Closed:
          cur = close(prefixSteps(b, cur, b.bound));
          break;
        case BlockMode::Nested:
          for (int k = 0; k < b.bound; ++k) cur = close(prefixSteps(b, cur, 1));
          break;
        case BlockMode::Unbounded:
          for (;;) {
            std::vector<char> next = close(prefixSteps(b, cur, 1));
            if (next == cur) break;
            cur = std::move(next);
          }
          break;
      }
    }
    return cur;
  }

 private:
  static constexpr int kindForall = 0, kindExists = 1;

  int poolSize() const { return static_cast<int>(vars_.size()); }

  void generate() {
    // Sizes are AST node counts; atoms are a relation or equality node plus
    // two variable terms.
    sizeStart_.assign(maxSize_ + 2, 0);
    entries_.push_back({Op::Top, -1, -1});
    entries_.push_back({Op::Bot, -1, -1});
    const int V = poolSize();
    for (int i = 0; i < V; ++i)
      for (int j = 0; j < V; ++j) atoms_.push_back(Atom{false, i, j});
    for (int i = 0; i < V; ++i)
      for (int j = 0; j < V; ++j) atoms_.push_back(Atom{true, i, j});

    sizeStart_[1] = 0;
    for (std::size_t s = 2; s <= maxSize_; ++s) {
      sizeStart_[s] = entries_.size();
      if (s == 3)
        for (std::size_t a = 0; a < atoms_.size(); ++a)
          entries_.push_back({Op::Atom, static_cast<std::int32_t>(a), -1});
      // Unary: negation, then the quantifiers in (kind, variable) order.
      for (std::int32_t id = begin(s - 1); id < end(s - 1); ++id)
        entries_.push_back({Op::Not, id, -1});
      for (int q = 0; q < 2 * V; ++q)
        for (std::int32_t id = begin(s - 1); id < end(s - 1); ++id)
          entries_.push_back({Op::Quant, id, q});
      // Binary: conjunction then disjunction over size-split pairs.
      for (Op op : {Op::And, Op::Or})
        for (std::size_t sa = 1; sa + 2 <= s; ++sa) {
          std::size_t sb = s - 1 - sa;
          for (std::int32_t a = begin(sa); a < end(sa); ++a)
            for (std::int32_t b = begin(sb); b < end(sb); ++b)
              entries_.push_back({op, a, b});
        }
    }
    sizeStart_[maxSize_ + 1] = entries_.size();
  }

  std::int32_t begin(std::size_t s) const { return static_cast<std::int32_t>(sizeStart_[s]); }
  std::int32_t end(std::size_t s) const {
    return static_cast<std::int32_t>(s + 1 < sizeStart_.size() ? sizeStart_[s + 1]
                                                               : entries_.size());
  }

  static std::uint64_t key(Op op, std::int32_t a, std::int32_t b) {
    return (static_cast<std::uint64_t>(op) << 56) |
           (static_cast<std::uint64_t>(a + 1) << 28) | static_cast<std::uint64_t>(b + 1);
  }

  void indexNodes() {
    keys_.resize(entries_.size());
    for (std::size_t id = 0; id < entries_.size(); ++id)
      keys_[id] = {key(entries_[id].op, entries_[id].a, entries_[id].b),
                   static_cast<std::int32_t>(id)};
    std::sort(keys_.begin(), keys_.end());
  }

  std::int32_t lookup(Op op, std::int32_t a, std::int32_t b) const {
    std::uint64_t k = key(op, a, b);
    auto it = std::lower_bound(keys_.begin(), keys_.end(), std::pair<std::uint64_t, std::int32_t>{k, 0});
    if (it == keys_.end() || it->first != k) return -1;
    return it->second;
  }

  void computeFreeMasks() {
    freeMask_.resize(entries_.size());
    const int V = poolSize();
    for (std::size_t id = 0; id < entries_.size(); ++id) {
      const Entry& e = entries_[id];
      switch (e.op) {
        case Op::Top:
        case Op::Bot:
          freeMask_[id] = 0;
          break;
        case Op::Atom:
          freeMask_[id] = static_cast<std::uint8_t>((1u << atoms_[e.a].v1) | (1u << atoms_[e.a].v2));
          break;
        case Op::Not:
          freeMask_[id] = freeMask_[e.a];
          break;
        case Op::And:
        case Op::Or:
          freeMask_[id] = freeMask_[e.a] | freeMask_[e.b];
          break;
        case Op::Quant:
          freeMask_[id] = freeMask_[e.a] & static_cast<std::uint8_t>(~(1u << (e.b % V)));
          break;
      }
    }
  }

  void computeQuantParents() {
    const int V = poolSize();
    quantParent_.assign(2 * V, {});
    for (int q = 0; q < 2 * V; ++q) {
      quantParent_[q].assign(entries_.size(), -1);
      for (std::size_t id = 0; id < entries_.size(); ++id)
        quantParent_[q][id] = lookup(Op::Quant, static_cast<std::int32_t>(id), q);
    }
  }

  // All maps pool -> pool; sigma s encodes i -> (s / V^i) % V.
  int sigmaCount() const {
    int n = 1;
    for (int i = 0; i < poolSize(); ++i) n *= poolSize();
    return n;
  }
  int sigmaApply(int s, int i) const {
    for (int k = 0; k < i; ++k) s /= poolSize();
    return s % poolSize();
  }
  int sigmaWithFixpoint(int s, int v) const {
    // The map equal to sigma s except that v maps to itself.
    int pow = 1;
    for (int k = 0; k < v; ++k) pow *= poolSize();
    return s - sigmaApply(s, v) * pow + v * pow;
  }

  void computeRenames() {
    const int V = poolSize();
    const int NS = sigmaCount();
    rename_.assign(NS, {});
    for (int s = 0; s < NS; ++s) rename_[s].assign(entries_.size(), -1);
    for (std::size_t id = 0; id < entries_.size(); ++id) {
      const Entry& e = entries_[id];
      for (int s = 0; s < NS; ++s) {
        std::int32_t im = -1;
        switch (e.op) {
          case Op::Top:
          case Op::Bot:
            im = static_cast<std::int32_t>(id);
            break;
          case Op::Atom: {
            const Atom& at = atoms_[e.a];
            std::int32_t idx = static_cast<std::int32_t>((at.isEq ? V * V : 0) +
                                                         sigmaApply(s, at.v1) * V +
                                                         sigmaApply(s, at.v2));
            im = lookup(Op::Atom, idx, -1);
            break;
          }
          case Op::Not: {
            std::int32_t ra = rename_[s][e.a];
            im = ra < 0 ? -1 : lookup(Op::Not, ra, -1);
            break;
          }
          case Op::And:
          case Op::Or: {
            std::int32_t ra = rename_[s][e.a], rb = rename_[s][e.b];
            im = (ra < 0 || rb < 0) ? -1 : lookup(e.op, ra, rb);
            break;
          }
          case Op::Quant: {
            int v = e.b % V;
            bool capture = false;
            for (int u = 0; u < V && !capture; ++u)
              if (u != v && sigmaApply(s, u) == v && (freeMask_[e.a] >> u & 1)) capture = true;
            if (capture) break;  // would need a variable outside the pool
            std::int32_t ra = rename_[sigmaWithFixpoint(s, v)][e.a];
            im = ra < 0 ? -1 : lookup(Op::Quant, ra, e.b);
            break;
          }
        }
        rename_[s][id] = im;
      }
    }
  }

  std::vector<char> quantifierFreeSet() const {
    std::vector<char> s(entries_.size(), 0);
    for (std::size_t id = 0; id < entries_.size(); ++id) {
      const Entry& e = entries_[id];
      switch (e.op) {
        case Op::Top:
        case Op::Bot:
        case Op::Atom:
          s[id] = 1;
          break;
        case Op::Not:
          s[id] = s[e.a];
          break;
        case Op::And:
        case Op::Or:
          s[id] = s[e.a] && s[e.b];
          break;
        case Op::Quant:
          break;
      }
    }
    return s;
  }

  bool blockBindsHere(const QuantifierBlock& b) const {
    return b.sortRestriction.empty() || b.sortRestriction == "vertex";
  }

  // S with up to `steps` further matching quantifiers in front of members.
  std::vector<char> prefixSteps(const QuantifierBlock& b, std::vector<char> s, int steps) const {
    if (!blockBindsHere(b)) return s;
    const int V = poolSize();
    int kind = b.kind == QuantKind::Forall ? kindForall : kindExists;
    for (int step = 0; step < steps; ++step) {
      bool changed = false;
      std::vector<std::int32_t> added;
      for (std::size_t id = 0; id < entries_.size(); ++id) {
        if (!s[id]) continue;
        for (int v = 0; v < V; ++v) {
          std::int32_t p = quantParent_[kind * V + v][id];
          if (p >= 0 && !s[p]) added.push_back(p);
        }
      }
      for (std::int32_t p : added)
        if (!s[p]) {
          s[p] = 1;
          changed = true;
        }
      if (!changed) break;
    }
    return s;
  }

  // Least superset closed under conjunction, disjunction and pool renamings,
  // with top and bottom adjoined.
  std::vector<char> close(std::vector<char> s) const {
    const int NS = sigmaCount();
    s[0] = s[1] = 1;  // top, bot
    for (bool changed = true; changed;) {
      changed = false;
      for (std::size_t id = 0; id < entries_.size(); ++id) {
        const Entry& e = entries_[id];
        if (!s[id] && (e.op == Op::And || e.op == Op::Or) && s[e.a] && s[e.b]) {
          s[id] = 1;
          changed = true;
        }
        if (s[id])
          for (int sg = 0; sg < NS; ++sg) {
            std::int32_t im = rename_[sg][id];
            if (im >= 0 && !s[im]) {
              s[im] = 1;
              changed = true;
            }
          }
      }
    }
    return s;
  }

  std::vector<std::string> vars_;
  std::size_t maxSize_;
  std::vector<Entry> entries_;
  std::vector<Atom> atoms_;
  std::vector<std::size_t> sizeStart_;
  std::vector<std::pair<std::uint64_t, std::int32_t>> keys_;
  std::vector<std::uint8_t> freeMask_;
  std::vector<std::vector<std::int32_t>> quantParent_;
  std::vector<std::vector<std::int32_t>> rename_;
};

}  // namespace fragcalc::enumeration
