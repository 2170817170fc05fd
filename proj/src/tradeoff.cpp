#include "macc/tradeoff.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

#include "macc/model.hpp"
#include "macc/privatizer.hpp"

namespace macc {

namespace {

std::string t_tag(int t) { return "t=" + std::to_string(t); }

/// Share count the privatized corners are built on: two blocks where the
/// pad arrangement is sound, otherwise whatever brute force finds.
std::optional<int> corner_omega(int num_nodes, int access_degree) {
  if (2 * access_degree <= num_nodes + 1) return 2;
  const auto result = compute_omega(num_nodes, access_degree);
  if (!result) return std::nullopt;
  return result->omega;
}

std::vector<TradeoffPoint> transformed_points(int num_nodes, int access_degree, int num_files,
                                              int omega) {
  std::vector<TradeoffPoint> points;
  const int t_max = num_nodes / access_degree;
  for (int t = 1; t <= t_max; ++t) {
    const Fraction memory = Fraction(static_cast<long long>(num_files) -
                                         static_cast<long long>(omega) * access_degree,
                                     1) *
                                Fraction(t, num_nodes) +
                            Fraction(omega);
    const Fraction load = Fraction(num_nodes - static_cast<long long>(t) * access_degree, t + 1);
    points.push_back(TradeoffPoint{memory, load, t_tag(t)});
  }
  points.push_back(TradeoffPoint{Fraction(num_files, access_degree), Fraction(0), "stripe"});
  points.push_back(TradeoffPoint{Fraction(omega), Fraction(num_nodes), "extension"});
  return points;
}

}  // namespace

std::vector<TradeoffPoint> nonprivate_points(int num_nodes, int access_degree, int num_files) {
  InstanceParams{num_nodes, access_degree, num_files, 1}.validate();
  std::vector<TradeoffPoint> points;
  const int t_max = num_nodes / access_degree;
  for (int t = 0; t <= t_max; ++t) {
    const Fraction memory(static_cast<long long>(num_files) * t, num_nodes);
    const Fraction load(num_nodes - static_cast<long long>(t) * access_degree, t + 1);
    points.push_back(TradeoffPoint{memory, load, t_tag(t)});
  }
  points.push_back(TradeoffPoint{Fraction(num_files, access_degree), Fraction(0), "stripe"});
  return points;
}

std::vector<TradeoffPoint> private_points(int num_nodes, int access_degree, int num_files) {
  InstanceParams{num_nodes, access_degree, num_files, 1}.validate();
  const auto omega = corner_omega(num_nodes, access_degree);
  if (!omega)
    return {TradeoffPoint{Fraction(num_files, access_degree), Fraction(0), "stripe"}};
  return transformed_points(num_nodes, access_degree, num_files, *omega);
}

std::vector<TradeoffPoint> private_points_general(int num_nodes, int access_degree,
                                                  int num_files) {
  InstanceParams{num_nodes, access_degree, num_files, 1}.validate();
  const auto result = compute_omega(num_nodes, access_degree);
  if (!result)
    return {TradeoffPoint{Fraction(num_files, access_degree), Fraction(0), "stripe"}};
  return transformed_points(num_nodes, access_degree, num_files, result->omega);
}

LowerEnvelope::LowerEnvelope(const std::vector<TradeoffPoint>& points) {
  if (points.empty()) throw std::invalid_argument("lower envelope needs at least one point");

  // cheapest load per memory value
  std::map<Fraction, TradeoffPoint> best;
  for (const TradeoffPoint& p : points) {
    const auto it = best.find(p.memory);
    if (it == best.end() || p.load < it->second.load) best[p.memory] = p;
  }
  std::vector<TradeoffPoint> sorted;
  for (const auto& [memory, point] : best) sorted.push_back(point);

  // beyond the first point reaching the overall load minimum every later
  // point is dominated (more memory, no less load)
  Fraction min_load = sorted.front().load;
  for (const TradeoffPoint& p : sorted) min_load = std::min(min_load, p.load);
  std::size_t cut = sorted.size();
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (sorted[i].load == min_load) {
      cut = i + 1;
      break;
    }
  }
  sorted.resize(cut);

  for (const TradeoffPoint& p : sorted) {
    while (vertices_.size() >= 2) {
      const TradeoffPoint& a = vertices_[vertices_.size() - 2];
      const TradeoffPoint& b = vertices_.back();
      const Fraction cross = (b.memory - a.memory) * (p.load - a.load) -
                             (b.load - a.load) * (p.memory - a.memory);
      if (cross > Fraction(0)) break;  // b sits strictly below the a-p line
      vertices_.pop_back();
    }
    vertices_.push_back(p);
  }
}

std::optional<Fraction> LowerEnvelope::eval(const Fraction& memory) const {
  if (memory < vertices_.front().memory) return std::nullopt;
  if (!(memory < vertices_.back().memory)) return vertices_.back().load;
  for (std::size_t i = 0; i + 1 < vertices_.size(); ++i) {
    const TradeoffPoint& a = vertices_[i];
    const TradeoffPoint& b = vertices_[i + 1];
    if (memory < a.memory || b.memory < memory) continue;
    return a.load + (b.load - a.load) * (memory - a.memory) / (b.memory - a.memory);
  }
  return vertices_.back().load;
}

}  // namespace macc
