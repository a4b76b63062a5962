#pragma once

#include <string>
#include <vector>

namespace windscen {

struct Farm {
  std::string id;
  double capacity_mw = 0.0;
  std::vector<std::string> neighbors;  // ordered, nearest first
};

/// Ordered farm list. The load order is frozen and defines the canonical
/// farm index w = 0..n_farms-1 used by every matrix in the project.
class FarmRegistry {
 public:
  FarmRegistry() = default;
  explicit FarmRegistry(std::vector<Farm> farms);

  int n_farms() const { return static_cast<int>(farms_.size()); }
  const Farm& farm(int w) const { return farms_.at(w); }
  const std::vector<Farm>& farms() const { return farms_; }

  /// Index for a farm id; -1 if unknown.
  int index_of(const std::string& id) const;

  /// Neighbor farm indices for farm w, in registry order of its list.
  std::vector<int> neighbor_indices(int w) const;

 private:
  std::vector<Farm> farms_;
};

/// Loads `farm_id,capacity_mw,neighbors` CSV (neighbors ';'-separated).
FarmRegistry load_registry(const std::string& path);
void write_registry(const FarmRegistry& reg, const std::string& path,
                    const std::string& header_comment = "");

}  // namespace windscen
