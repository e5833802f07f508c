#pragma once

#include <compare>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

namespace cdc {

// Binomial coefficient C(n, k); zero when k < 0 or k > n.
std::int64_t binomial(int n, int k);

// A set of node ids. Ids are 1-based at this interface (nodes 1..K);
// internally ranking works on 0-based positions.
class NodeSet {
 public:
  NodeSet() = default;
  // Members must be strictly increasing and >= 1; throws ParameterError.
  explicit NodeSet(std::vector<int> members);
  NodeSet(std::initializer_list<int> members) : NodeSet(std::vector<int>(members)) {}

  const std::vector<int>& members() const { return members_; }
  int size() const { return static_cast<int>(members_.size()); }
  bool empty() const { return members_.empty(); }
  bool contains(int node) const;
  // Position of `node` within the sorted member list, or -1.
  int position_of(int node) const;
  int max_member() const { return members_.empty() ? 0 : members_.back(); }

  NodeSet with(int node) const;
  NodeSet without(int node) const;

  std::string to_string() const;

  auto operator<=>(const NodeSet&) const = default;
  bool operator==(const NodeSet&) const = default;

 private:
  std::vector<int> members_;
};

// All i-subsets of {1..K} in colexicographic order: sets are compared by
// their largest element first, so {1,2} < {1,3} < {2,3} < {1,4} < ...
// The position in this sequence is the batch number of the subset.
std::vector<NodeSet> enumerate_subsets(int K, int i);

// Colex rank of `s` among the |s|-subsets of {1..K}; inverse of
// enumerate_subsets. O(|s|).
std::int64_t subset_rank(const NodeSet& s, int K);

// Subset of size i with colex rank `rank`.
NodeSet subset_unrank(std::int64_t rank, int K, int i);

}  // namespace cdc
