#include "cdc/combinatorics.hpp"

#include <algorithm>

#include "cdc/errors.hpp"

namespace cdc {

std::int64_t binomial(int n, int k) {
  if (k < 0 || n < 0 || k > n) return 0;
  k = std::min(k, n - k);
  std::int64_t result = 1;
  for (int j = 1; j <= k; ++j) {
    result = result * (n - k + j) / j;
  }
  return result;
}

NodeSet::NodeSet(std::vector<int> members) : members_(std::move(members)) {
  for (std::size_t j = 0; j < members_.size(); ++j) {
    if (members_[j] < 1) {
      throw ParameterError("node ids are 1-based; got " + std::to_string(members_[j]));
    }
    if (j > 0 && members_[j] <= members_[j - 1]) {
      throw ParameterError("node set members must be strictly increasing");
    }
  }
}

bool NodeSet::contains(int node) const {
  return std::binary_search(members_.begin(), members_.end(), node);
}

int NodeSet::position_of(int node) const {
  auto it = std::lower_bound(members_.begin(), members_.end(), node);
  if (it == members_.end() || *it != node) return -1;
  return static_cast<int>(it - members_.begin());
}

NodeSet NodeSet::with(int node) const {
  std::vector<int> out = members_;
  auto it = std::lower_bound(out.begin(), out.end(), node);
  if (it == out.end() || *it != node) out.insert(it, node);
  return NodeSet(std::move(out));
}

NodeSet NodeSet::without(int node) const {
  std::vector<int> out;
  out.reserve(members_.size());
  for (int m : members_) {
    if (m != node) out.push_back(m);
  }
  return NodeSet(std::move(out));
}

std::string NodeSet::to_string() const {
  std::string out = "{";
  for (std::size_t j = 0; j < members_.size(); ++j) {
    if (j) out += ",";
    out += std::to_string(members_[j]);
  }
  return out + "}";
}

namespace {

void check_sizes(int K, int i) {
  if (K < 1) throw ParameterError("K must be >= 1, got " + std::to_string(K));
  if (i < 1 || i > K) {
    throw ParameterError("subset size must lie in [1, " + std::to_string(K) + "], got " +
                         std::to_string(i));
  }
}

}  // namespace

std::vector<NodeSet> enumerate_subsets(int K, int i) {
  check_sizes(K, i);
  std::vector<NodeSet> out;
  out.reserve(static_cast<std::size_t>(binomial(K, i)));
  // Colex successor on 0-based positions: bump the lowest element that can
  // move up without colliding, reset everything below it.
  std::vector<int> c(i);
  for (int j = 0; j < i; ++j) c[j] = j;
  while (true) {
    std::vector<int> members(i);
    for (int j = 0; j < i; ++j) members[j] = c[j] + 1;
    out.emplace_back(std::move(members));
    int j = 0;
    while (j < i && c[j] + 1 == (j + 1 < i ? c[j + 1] : K)) ++j;
    if (j == i) break;
    ++c[j];
    for (int l = 0; l < j; ++l) c[l] = l;
  }
  return out;
}

std::int64_t subset_rank(const NodeSet& s, int K) {
  if (s.empty()) throw ParameterError("cannot rank the empty set");
  check_sizes(K, s.size());
  if (s.max_member() > K) {
    throw ParameterError("member " + std::to_string(s.max_member()) + " out of range [1, " +
                         std::to_string(K) + "]");
  }
  std::int64_t rank = 0;
  const auto& m = s.members();
  for (int j = 0; j < s.size(); ++j) rank += binomial(m[j] - 1, j + 1);
  return rank;
}

NodeSet subset_unrank(std::int64_t rank, int K, int i) {
  check_sizes(K, i);
  if (rank < 0 || rank >= binomial(K, i)) {
    throw ParameterError("rank " + std::to_string(rank) + " out of range for C(" +
                         std::to_string(K) + "," + std::to_string(i) + ")");
  }
  std::vector<int> members(i);
  int top = K - 1;
  for (int j = i; j >= 1; --j) {
    while (binomial(top, j) > rank) --top;
    members[j - 1] = top + 1;
    rank -= binomial(top, j);
    --top;
  }
  return NodeSet(std::move(members));
}

}  // namespace cdc
