#include "windscen/registry.hpp"

#include <cstdio>
#include <set>
#include <stdexcept>

#include "windscen/csv.hpp"

namespace windscen {

FarmRegistry::FarmRegistry(std::vector<Farm> farms) : farms_(std::move(farms)) {
  std::set<std::string> seen;
  for (const auto& f : farms_) {
    if (f.capacity_mw <= 0.0) {
      throw std::invalid_argument("farm '" + f.id + "' has non-positive capacity");
    }
    if (!seen.insert(f.id).second) {
      throw std::invalid_argument("duplicate farm id '" + f.id + "'");
    }
  }
  for (const auto& f : farms_) {
    for (const auto& n : f.neighbors) {
      if (n == f.id) {
        throw std::invalid_argument("farm '" + f.id + "' lists itself as neighbor");
      }
      if (!seen.count(n)) {
        throw std::invalid_argument("farm '" + f.id + "' references unknown neighbor '" + n + "'");
      }
    }
  }
}

int FarmRegistry::index_of(const std::string& id) const {
  for (int i = 0; i < n_farms(); ++i) {
    if (farms_[i].id == id) return i;
  }
  return -1;
}

std::vector<int> FarmRegistry::neighbor_indices(int w) const {
  std::vector<int> out;
  for (const auto& n : farms_.at(w).neighbors) out.push_back(index_of(n));
  return out;
}

FarmRegistry load_registry(const std::string& path) {
  CsvReader r(path);
  if (r.header() != std::vector<std::string>{"farm_id", "capacity_mw", "neighbors"}) {
    throw std::runtime_error("bad registry header in " + path);
  }
  std::vector<Farm> farms;
  std::vector<std::string> f;
  while (r.next(f)) {
    if (f.size() != 3) {
      throw std::runtime_error("malformed registry row at " + path + ":" +
                               std::to_string(r.line_number()));
    }
    Farm farm;
    farm.id = f[0];
    farm.capacity_mw = parse_double_field(f[1], r);
    if (!f[2].empty()) split_csv(f[2], ';', farm.neighbors);
    farms.push_back(std::move(farm));
  }
  return FarmRegistry(std::move(farms));
}

void write_registry(const FarmRegistry& reg, const std::string& path,
                    const std::string& header_comment) {
  std::FILE* fp = std::fopen(path.c_str(), "w");
  if (!fp) throw std::runtime_error("cannot write " + path);
  if (!header_comment.empty()) std::fprintf(fp, "# %s\n", header_comment.c_str());
  std::fprintf(fp, "farm_id,capacity_mw,neighbors\n");
  for (const auto& farm : reg.farms()) {
    std::string nb;
    for (std::size_t i = 0; i < farm.neighbors.size(); ++i) {
      if (i) nb += ';';
      nb += farm.neighbors[i];
    }
    std::fprintf(fp, "%s,%.3f,%s\n", farm.id.c_str(), farm.capacity_mw, nb.c_str());
  }
  std::fclose(fp);
}

}  // namespace windscen
