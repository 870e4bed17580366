#pragma once

#include <initializer_list>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hamforge/rational.hpp"

namespace hamforge {

/// Ordered list of coordinate names. Every object built over a chart shares
/// its variable order; variable i of a chart is index i of an ExpPoly.
class Chart {
 public:
  Chart() : names_(std::make_shared<const std::vector<std::string>>()) {}
  explicit Chart(std::vector<std::string> names);
  Chart(std::initializer_list<std::string> names) : Chart(std::vector<std::string>(names)) {}

  std::size_t size() const { return names_->size(); }
  const std::string& name(std::size_t i) const { return names_->at(i); }
  const std::vector<std::string>& names() const { return *names_; }
  std::optional<std::size_t> find(std::string_view name) const;
  /// Throws UnknownVariable when absent.
  std::size_t index(std::string_view name) const;

  /// This chart followed by extra names.
  Chart extended(const std::vector<std::string>& extra) const;
  /// True when this chart's names form a prefix of other's.
  bool is_prefix_of(const Chart& other) const;

  friend bool operator==(const Chart& a, const Chart& b) {
    return a.names_ == b.names_ || *a.names_ == *b.names_;
  }

 private:
  std::shared_ptr<const std::vector<std::string>> names_;
};

void require_same_chart(const Chart& a, const Chart& b, std::string_view context);

/// Exact values for the model parameters a, b, c, d and any auxiliary
/// constants (k, k1, k2, alpha, ...).
class ParamSet {
 public:
  ParamSet() = default;
  ParamSet(std::initializer_list<std::pair<const std::string, Rational>> init) : values_(init) {}

  /// Throws UnboundParameter when absent.
  const Rational& get(std::string_view name) const;
  bool has(std::string_view name) const { return values_.find(name) != values_.end(); }
  ParamSet& set(const std::string& name, Rational value);
  ParamSet with(const std::string& name, Rational value) const;
  /// Entries of other override entries of this.
  ParamSet merged(const ParamSet& other) const;

  const std::map<std::string, Rational, std::less<>>& values() const { return values_; }
  std::string str() const;

  friend bool operator==(const ParamSet&, const ParamSet&) = default;

 private:
  std::map<std::string, Rational, std::less<>> values_;
};

}  // namespace hamforge
