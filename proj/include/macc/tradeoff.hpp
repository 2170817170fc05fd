#pragma once

#include <optional>
#include <string>
#include <vector>

#include "macc/fraction.hpp"

namespace macc {

/// One achievable (memory, load) corner. `tag` carries the parameter value
/// ("t=0", "t=1", ...) or the special corner names "stripe" and "extension".
struct TradeoffPoint {
  Fraction memory;
  Fraction load;
  std::string tag;
};

/// Memory-load corners achievable without demand privacy.
std::vector<TradeoffPoint> nonprivate_points(int num_nodes, int access_degree, int num_files);

/// Corners of the privatized schemes. Uses the two-block key arrangement
/// where it applies and otherwise substitutes the brute-forced share count;
/// when no share count works only the zero-load corner remains.
std::vector<TradeoffPoint> private_points(int num_nodes, int access_degree, int num_files);

/// Same transform but always with the brute-forced share count, which can
/// beat the two-block arrangement (a single share suffices at degree 1).
std::vector<TradeoffPoint> private_points_general(int num_nodes, int access_degree,
                                                  int num_files);

/// Lower convex envelope of a point set, evaluated as load versus memory.
/// Below the smallest memory nothing is achievable (eval gives nullopt);
/// beyond the largest hull vertex the load stays at its minimum.
class LowerEnvelope {
 public:
  explicit LowerEnvelope(const std::vector<TradeoffPoint>& points);

  const std::vector<TradeoffPoint>& vertices() const { return vertices_; }
  std::optional<Fraction> eval(const Fraction& memory) const;

 private:
  std::vector<TradeoffPoint> vertices_;
};

}  // namespace macc
