#ifndef PMELAB_FIELD_HPP
#define PMELAB_FIELD_HPP

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "pmelab/grid.hpp"

namespace pmelab {

/// Nodal values of a scalar function on a space-time grid, stored time-major:
/// index = step * num_nodes + node.
class ScalarField {
 public:
  ScalarField() = default;
  ScalarField(SpaceTimeGrid grid, double fill = 0.0, bool nonneg = false);

  static ScalarField sample(const SpaceTimeGrid& grid,
                            const std::function<double(double, double, double)>& f,
                            bool nonneg = false);
  static ScalarField constant(const SpaceTimeGrid& grid, double c);

  const SpaceTimeGrid& grid() const { return grid_; }
  bool nonneg() const { return nonneg_; }
  void set_nonneg(bool flag) { nonneg_ = flag; }

  double& at(int step, int node) { return values_[static_cast<size_t>(step) * grid_.num_nodes() + node]; }
  double at(int step, int node) const { return values_[static_cast<size_t>(step) * grid_.num_nodes() + node]; }
  double& at(int step, int ix, int iy) { return at(step, grid_.node(ix, iy)); }
  double at(int step, int ix, int iy) const { return at(step, grid_.node(ix, iy)); }

  std::vector<double> slice(int step) const;
  void set_slice(int step, const std::vector<double>& v);

  const std::vector<double>& values() const { return values_; }
  std::vector<double>& values() { return values_; }

  double max_abs() const;
  double max() const;
  double min() const;

  /// Applies f nodewise; the result keeps this field's grid.
  ScalarField map(const std::function<double(double)>& f) const;

  /// Checks finiteness, value count and the nonneg flag; throws on violation.
  void validate() const;

  void check_same_grid(const ScalarField& other) const;

 private:
  SpaceTimeGrid grid_;
  std::vector<double> values_;
  bool nonneg_ = false;
};

/// Binary dump, magic "PMEF1": header of little-endian 64-bit values
/// (dim, nx per axis, nt, extents, T) followed by time-major row-major doubles.
void write_field_dump(const ScalarField& f, const std::string& path);
ScalarField read_field_dump(const std::string& path);

/// CSV export: one row per node per step, columns x[,y],t,value.
void write_field_csv(const ScalarField& f, std::ostream& os);
void write_field_csv(const ScalarField& f, const std::string& path);

/// Deterministic formatting used by every report writer.
std::string format_double(double v);

/// Writes content to path atomically (temp file + rename).
void write_file_atomic(const std::string& path, const std::string& content);

}  // namespace pmelab

#endif
