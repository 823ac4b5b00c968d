#pragma once

/**
 * Rooted ordered trees as preorder out-degree sequences, with exact
 * subtree counting.
 *
 * R(T) = number of root subtrees (connected node sets containing the root),
 * S(T) = number of all subtrees (non-empty connected node sets).
 * Both follow from one post-order pass over the product rule
 *   R(T) = prod_children (R(child) + 1),   S(T) = sum_v R(T_v).
 */

#include "census/common.hpp"

#include <cstdint>
#include <cstdlib>
#include <sstream>
#include <string>
#include <vector>

namespace census {

struct OrderedTree {
  std::vector<uint32_t> degrees;  // preorder out-degree sequence

  size_t size() const { return degrees.size(); }

  /// Checks sum(degrees) == n-1 and the ballot condition on proper prefixes.
  static bool valid_degree_sequence(const std::vector<uint32_t>& deg) {
    if (deg.empty()) return false;
    long long open = 1;  // unfilled child slots, root included
    for (size_t i = 0; i < deg.size(); ++i) {
      if (open <= 0) return false;  // sequence closed early
      open += static_cast<long long>(deg[i]) - 1;
    }
    return open == 0;
  }

  static OrderedTree from_degrees(std::vector<uint32_t> deg) {
    if (!valid_degree_sequence(deg)) {
      throw DomainError("invalid preorder degree sequence");
    }
    OrderedTree t;
    t.degrees = std::move(deg);
    return t;
  }

  /// Parses the text format: comma-separated preorder degrees, e.g. "2,0,0".
  static OrderedTree parse(const std::string& text) {
    std::vector<uint32_t> deg;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
      if (item.empty()) throw ParseError("empty degree in tree text");
      char* end = nullptr;
      long v = std::strtol(item.c_str(), &end, 10);
      if (end == nullptr || *end != '\0' || v < 0) {
        throw ParseError("bad degree '" + item + "' in tree text");
      }
      deg.push_back(static_cast<uint32_t>(v));
    }
    if (deg.empty()) throw ParseError("empty tree text");
    return from_degrees(std::move(deg));
  }

  std::string to_text() const {
    std::string out;
    for (size_t i = 0; i < degrees.size(); ++i) {
      if (i) out += ',';
      out += std::to_string(degrees[i]);
    }
    return out;
  }
};

struct CountPair {
  BigInt r;
  BigInt s;
};

namespace detail {

/// Default cap for exact big-integer counting; R(T) has ~|T| bits.
constexpr size_t kBigCountCap = 20000;

/**
 * Per-node R values in preorder order, by a reverse-preorder stack pass:
 * when node i is reached, the results of its children are the top d_i
 * stack entries.
 */
inline std::vector<BigInt> root_counts_per_node(const OrderedTree& t,
                                                size_t cap = kBigCountCap) {
  if (t.size() > cap) {
    throw DomainError("tree too large for exact big-integer counting");
  }
  std::vector<BigInt> per_node(t.size());
  std::vector<BigInt> stack;
  stack.reserve(64);
  for (size_t i = t.size(); i-- > 0;) {
    uint32_t d = t.degrees[i];
    BigInt r = 1;
    for (uint32_t c = 0; c < d; ++c) {
      r *= stack.back() + 1;
      stack.pop_back();
    }
    per_node[i] = r;
    stack.push_back(std::move(r));
  }
  return per_node;
}

/// Same pass in log domain: returns log R(T_v) per node, error O(n eps).
inline std::vector<double> log_root_counts_per_node(const OrderedTree& t) {
  std::vector<double> per_node(t.size());
  std::vector<double> stack;
  stack.reserve(64);
  for (size_t i = t.size(); i-- > 0;) {
    uint32_t d = t.degrees[i];
    double lr = 0.0;
    for (uint32_t c = 0; c < d; ++c) {
      // log(R_c + 1) = log R_c + log1p(exp(-log R_c))
      lr += stack.back() + std::log1p(std::exp(-stack.back()));
      stack.pop_back();
    }
    per_node[i] = lr;
    stack.push_back(lr);
  }
  return per_node;
}

}  // namespace detail

/// R(T), exact.
inline BigInt count_root_subtrees(const OrderedTree& t,
                                  size_t cap = detail::kBigCountCap) {
  return detail::root_counts_per_node(t, cap).front();
}

/// S(T) = sum over nodes of R(fringe subtree), exact; same single pass.
inline BigInt count_subtrees(const OrderedTree& t,
                             size_t cap = detail::kBigCountCap) {
  auto per_node = detail::root_counts_per_node(t, cap);
  BigInt s = 0;
  for (const auto& r : per_node) s += r;
  return s;
}

struct LogCounts {
  double log_r;
  double log_s;
};

/**
 * log R(T) and log S(T) in double precision without big integers; the
 * default path for Monte Carlo runs where R(T) ~ e^{mu n}.
 */
inline LogCounts log_counts(const OrderedTree& t) {
  auto per_node = detail::log_root_counts_per_node(t);
  double mx = per_node.front();
  for (double v : per_node) mx = v > mx ? v : mx;
  double acc = 0.0;
  for (double v : per_node) acc += std::exp(v - mx);
  return LogCounts{per_node.front(), mx + std::log(acc)};
}

/**
 * Toll values f(T_v) = log(1 + 1/R(T_v)) for every v, in preorder.
 * Their sum telescopes to log(R(T) + 1).
 */
inline std::vector<double> toll_profile(const OrderedTree& t) {
  auto per_node = detail::log_root_counts_per_node(t);
  for (double& v : per_node) v = std::log1p(std::exp(-v));
  return per_node;
}

/**
 * Independent oracle: enumerate all node subsets, keep connected ones.
 * A subset is connected in a rooted tree exactly when one chosen node's
 * parent lies outside the subset (component count over (node,parent)
 * edges restricted to the subset equals one).
 */
inline CountPair brute_force_counts(const OrderedTree& t) {
  const size_t n = t.size();
  if (n > 25) throw DomainError("brute_force_counts capped at 25 nodes");
  // parent indices from the preorder degree sequence
  std::vector<int> parent(n, -1);
  std::vector<int> slot_stack;  // nodes with unfilled child slots
  std::vector<uint32_t> remaining(n);
  for (size_t i = 0; i < n; ++i) {
    if (i > 0) {
      parent[i] = slot_stack.back();
      if (--remaining[static_cast<size_t>(slot_stack.back())] == 0) {
        slot_stack.pop_back();
      }
    }
    remaining[i] = t.degrees[i];
    if (remaining[i] > 0) slot_stack.push_back(static_cast<int>(i));
  }
  BigInt r = 0, s = 0;
  const uint32_t full = static_cast<uint32_t>((1ULL << n) - 1);
  for (uint32_t mask = 1; mask <= full; ++mask) {
    int components = 0;
    for (size_t i = 0; i < n; ++i) {
      if (!(mask >> i & 1u)) continue;
      if (parent[i] < 0 || !(mask >> parent[i] & 1u)) ++components;
    }
    if (components == 1) {
      ++s;
      if (mask & 1u) ++r;  // node 0 is the root
    }
  }
  return CountPair{r, s};
}

enum class SpecialTree { Ta, Tb };

/**
 * The two order-(3l+1) witness trees whose root-subtree counts differ:
 * Ta has the root and two of its children of out-degree l; Tb has the
 * root, one child and one grandchild of out-degree l. All other nodes
 * are leaves.
 */
inline OrderedTree build_special_tree(SpecialTree variant, int ell) {
  if (ell < 2) throw DomainError("build_special_tree requires ell >= 2");
  const uint32_t l = static_cast<uint32_t>(ell);
  std::vector<uint32_t> deg;
  deg.reserve(static_cast<size_t>(3 * ell + 1));
  auto leaves = [&](int count) { deg.insert(deg.end(), static_cast<size_t>(count), 0u); };
  deg.push_back(l);  // root
  if (variant == SpecialTree::Ta) {
    deg.push_back(l);
    leaves(ell);
    deg.push_back(l);
    leaves(ell);
    leaves(ell - 2);
  } else {
    deg.push_back(l);  // child
    deg.push_back(l);  // grandchild
    leaves(ell);       // grandchild's leaves
    leaves(ell - 1);   // child's remaining leaves
    leaves(ell - 1);   // root's remaining leaves
  }
  return OrderedTree::from_degrees(std::move(deg));
}

}  // namespace census
