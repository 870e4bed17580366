#include "hamforge/chart.hpp"

#include <set>
#include <sstream>

#include "hamforge/error.hpp"

namespace hamforge {

Chart::Chart(std::vector<std::string> names) {
  std::set<std::string> seen;
  for (const auto& n : names) {
    if (n.empty()) throw Error(ErrorCode::InvalidArgument, "empty coordinate name");
    if (!seen.insert(n).second) throw Error(ErrorCode::InvalidArgument, "duplicate coordinate '" + n + "'");
  }
  names_ = std::make_shared<const std::vector<std::string>>(std::move(names));
}

std::optional<std::size_t> Chart::find(std::string_view name) const {
  for (std::size_t i = 0; i < names_->size(); ++i)
    if ((*names_)[i] == name) return i;
  return std::nullopt;
}

std::size_t Chart::index(std::string_view name) const {
  if (auto i = find(name)) return *i;
  throw Error(ErrorCode::UnknownVariable, "'" + std::string(name) + "' is not a coordinate of the chart");
}

Chart Chart::extended(const std::vector<std::string>& extra) const {
  std::vector<std::string> all = *names_;
  all.insert(all.end(), extra.begin(), extra.end());
  return Chart(std::move(all));
}

bool Chart::is_prefix_of(const Chart& other) const {
  if (size() > other.size()) return false;
  for (std::size_t i = 0; i < size(); ++i)
    if (name(i) != other.name(i)) return false;
  return true;
}

void require_same_chart(const Chart& a, const Chart& b, std::string_view context) {
  if (!(a == b)) throw Error(ErrorCode::ChartMismatch, std::string(context) + ": charts differ");
}

const Rational& ParamSet::get(std::string_view name) const {
  auto it = values_.find(name);
  if (it == values_.end()) throw Error(ErrorCode::UnboundParameter, "parameter '" + std::string(name) + "' is not bound");
  return it->second;
}

ParamSet& ParamSet::set(const std::string& name, Rational value) {
  values_[name] = std::move(value);
  return *this;
}

ParamSet ParamSet::with(const std::string& name, Rational value) const {
  ParamSet p = *this;
  p.set(name, std::move(value));
  return p;
}

ParamSet ParamSet::merged(const ParamSet& other) const {
  ParamSet p = *this;
  for (const auto& [k, v] : other.values_) p.values_[k] = v;
  return p;
}

std::string ParamSet::str() const {
  std::ostringstream os;
  bool first = true;
  for (const auto& [k, v] : values_) {
    if (!first) os << ", ";
    os << k << "=" << v;
    first = false;
  }
  return os.str();
}

}  // namespace hamforge
