#ifndef VOI_TYPES_HPP
#define VOI_TYPES_HPP

#include <bit>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace voi {

// Validation failures on user-supplied inputs (files, flags, queries).
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

// Conditioning on evidence whose probability is exactly zero.  Callers that
// walk policy branches check the branch probability first; anything else
// reaching this state is asked to handle it explicitly rather than have the
// result silently renormalized.
class ZeroProbabilityEvidence : public std::runtime_error {
 public:
  ZeroProbabilityEvidence() : std::runtime_error("evidence has zero probability") {}
};

// Set of variable ids as a bit mask.  Networks are capped at 64 variables,
// which covers every input this tool is meant for.
class VarSet {
 public:
  constexpr VarSet() = default;
  constexpr explicit VarSet(std::uint64_t bits) : bits_(bits) {}

  static constexpr VarSet single(int v) { return VarSet(std::uint64_t{1} << v); }

  constexpr bool contains(int v) const { return (bits_ >> v) & 1; }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr int count() const { return std::popcount(bits_); }
  constexpr std::uint64_t bits() const { return bits_; }

  void add(int v) { bits_ |= std::uint64_t{1} << v; }
  void remove(int v) { bits_ &= ~(std::uint64_t{1} << v); }

  constexpr bool subset_of(VarSet other) const { return (bits_ & ~other.bits_) == 0; }
  constexpr bool intersects(VarSet other) const { return (bits_ & other.bits_) != 0; }

  constexpr VarSet operator|(VarSet o) const { return VarSet(bits_ | o.bits_); }
  constexpr VarSet operator&(VarSet o) const { return VarSet(bits_ & o.bits_); }
  constexpr VarSet operator-(VarSet o) const { return VarSet(bits_ & ~o.bits_); }
  constexpr bool operator==(const VarSet&) const = default;

  VarSet& operator|=(VarSet o) { bits_ |= o.bits_; return *this; }
  VarSet& operator&=(VarSet o) { bits_ &= o.bits_; return *this; }

  int lowest() const { return std::countr_zero(bits_); }

  std::vector<int> to_vector() const {
    std::vector<int> out;
    for (std::uint64_t b = bits_; b; b &= b - 1) out.push_back(std::countr_zero(b));
    return out;
  }

  // Canonical order: by size, then lexicographically by ascending members.
  bool canonical_less(VarSet other) const {
    if (count() != other.count()) return count() < other.count();
    std::uint64_t a = bits_, b = other.bits_;
    while (a && b) {
      int ia = std::countr_zero(a), ib = std::countr_zero(b);
      if (ia != ib) return ia < ib;
      a &= a - 1;
      b &= b - 1;
    }
    return false;
  }

 private:
  std::uint64_t bits_ = 0;
};

// Partial assignment of states to variables; -1 marks unobserved.
class Assignment {
 public:
  Assignment() = default;
  explicit Assignment(int num_vars) : state_(num_vars, -1) {}

  void set(int var, int state) {
    if (vars_.contains(var)) throw ValidationError("variable assigned twice");
    ensure(var);
    state_[var] = state;
    vars_.add(var);
  }

  bool has(int var) const { return vars_.contains(var); }
  int state(int var) const { return state_[var]; }
  VarSet vars() const { return vars_; }
  bool empty() const { return vars_.empty(); }

  Assignment merged(const Assignment& extra) const {
    if (vars_.intersects(extra.vars_)) throw ValidationError("overlapping assignments");
    Assignment out = *this;
    for (int v : extra.vars_.to_vector()) out.set(v, extra.state_[v]);
    return out;
  }

  // Stable byte key for memoization.
  std::string key() const {
    std::string k;
    for (int v : vars_.to_vector()) {
      k.push_back(static_cast<char>(v));
      k.push_back(static_cast<char>(state_[v]));
    }
    return k;
  }

  bool operator==(const Assignment& o) const {
    if (vars_ != o.vars_) return false;
    for (int v : vars_.to_vector())
      if (state_[v] != o.state_[v]) return false;
    return true;
  }

 private:
  void ensure(int var) {
    if (var >= static_cast<int>(state_.size())) state_.resize(var + 1, -1);
  }

  std::vector<int> state_;
  VarSet vars_;
};

}  // namespace voi

#endif
