#include "pmelab/field.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <limits>
#include <sstream>

namespace pmelab {

ScalarField::ScalarField(SpaceTimeGrid grid, double fill, bool nonneg)
    : grid_(std::move(grid)),
      values_(static_cast<size_t>(grid_.num_nodes()) * grid_.nt, fill),
      nonneg_(nonneg) {}

ScalarField ScalarField::sample(const SpaceTimeGrid& grid,
                                const std::function<double(double, double, double)>& f,
                                bool nonneg) {
  ScalarField out(grid, 0.0, nonneg);
  for (int k = 0; k < grid.nt; ++k) {
    const double t = grid.t(k);
    for (int n = 0; n < grid.num_nodes(); ++n)
      out.at(k, n) = f(grid.coord(n, 0), grid.coord(n, 1), t);
  }
  return out;
}

ScalarField ScalarField::constant(const SpaceTimeGrid& grid, double c) {
  return ScalarField(grid, c, c >= 0.0);
}

std::vector<double> ScalarField::slice(int step) const {
  const int nn = grid_.num_nodes();
  return std::vector<double>(values_.begin() + static_cast<size_t>(step) * nn,
                             values_.begin() + static_cast<size_t>(step + 1) * nn);
}

void ScalarField::set_slice(int step, const std::vector<double>& v) {
  const int nn = grid_.num_nodes();
  if (static_cast<int>(v.size()) != nn)
    throw std::invalid_argument("field: slice size mismatch");
  std::copy(v.begin(), v.end(), values_.begin() + static_cast<size_t>(step) * nn);
}

double ScalarField::max_abs() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::fabs(v));
  return m;
}

double ScalarField::max() const {
  double m = -std::numeric_limits<double>::infinity();
  for (double v : values_) m = std::max(m, v);
  return m;
}

double ScalarField::min() const {
  double m = std::numeric_limits<double>::infinity();
  for (double v : values_) m = std::min(m, v);
  return m;
}

ScalarField ScalarField::map(const std::function<double(double)>& f) const {
  ScalarField out(grid_);
  for (size_t i = 0; i < values_.size(); ++i) out.values_[i] = f(values_[i]);
  return out;
}

void ScalarField::validate() const {
  if (values_.size() != static_cast<size_t>(grid_.num_nodes()) * grid_.nt)
    throw std::runtime_error("field: value count != node count * nt");
  for (double v : values_) {
    if (!std::isfinite(v)) throw std::runtime_error("field: non-finite value");
    if (nonneg_ && v < 0.0) throw std::runtime_error("field: negative value in nonneg field");
  }
}

void ScalarField::check_same_grid(const ScalarField& other) const {
  if (!grid_.same_layout(other.grid_))
    throw std::invalid_argument("field: grid layout mismatch");
}

namespace {

void put_u64(std::string& out, uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_f64(std::string& out, double v) {
  uint64_t bits;
  std::memcpy(&bits, &v, 8);
  put_u64(out, bits);
}

uint64_t get_u64(const char* p) {
  uint64_t v = 0;
  for (int i = 0; i < 8; ++i)
    v |= static_cast<uint64_t>(static_cast<unsigned char>(p[i])) << (8 * i);
  return v;
}

double get_f64(const char* p) {
  const uint64_t bits = get_u64(p);
  double v;
  std::memcpy(&v, &bits, 8);
  return v;
}

}  // namespace

void write_field_dump(const ScalarField& f, const std::string& path) {
  const SpaceTimeGrid& g = f.grid();
  std::string buf;
  buf += "PMEF1";
  put_u64(buf, static_cast<uint64_t>(g.dim));
  put_u64(buf, static_cast<uint64_t>(g.nx[0]));
  put_u64(buf, static_cast<uint64_t>(g.nx[1]));
  put_u64(buf, static_cast<uint64_t>(g.nt));
  put_f64(buf, g.lo[0]);
  put_f64(buf, g.hi[0]);
  put_f64(buf, g.lo[1]);
  put_f64(buf, g.hi[1]);
  put_f64(buf, g.T);
  for (double v : f.values()) put_f64(buf, v);
  write_file_atomic(path, buf);
}

ScalarField read_field_dump(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open field dump: " + path);
  std::string buf((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (buf.size() < 5 + 9 * 8 || buf.compare(0, 5, "PMEF1") != 0)
    throw std::runtime_error("bad field dump header: " + path);
  const char* p = buf.data() + 5;
  const int dim = static_cast<int>(get_u64(p)); p += 8;
  const int nx0 = static_cast<int>(get_u64(p)); p += 8;
  const int nx1 = static_cast<int>(get_u64(p)); p += 8;
  const int nt = static_cast<int>(get_u64(p)); p += 8;
  const double ax = get_f64(p); p += 8;
  const double bx = get_f64(p); p += 8;
  const double ay = get_f64(p); p += 8;
  const double by = get_f64(p); p += 8;
  const double T = get_f64(p); p += 8;
  SpaceTimeGrid g = dim == 1 ? SpaceTimeGrid::make1d(ax, bx, nx0, nt, T)
                             : SpaceTimeGrid::make2d(ax, bx, ay, by, nx0, nx1, nt, T);
  const size_t count = static_cast<size_t>(g.num_nodes()) * nt;
  if (buf.size() != 5 + 9 * 8 + count * 8)
    throw std::runtime_error("field dump size mismatch: " + path);
  ScalarField f(g);
  for (size_t i = 0; i < count; ++i) f.values()[i] = get_f64(p + i * 8);
  return f;
}

void write_field_csv(const ScalarField& f, std::ostream& os) {
  const SpaceTimeGrid& g = f.grid();
  os << (g.dim == 1 ? "x,t,value\n" : "x,y,t,value\n");
  for (int k = 0; k < g.nt; ++k)
    for (int n = 0; n < g.num_nodes(); ++n) {
      os << format_double(g.coord(n, 0)) << ',';
      if (g.dim == 2) os << format_double(g.coord(n, 1)) << ',';
      os << format_double(g.t(k)) << ',' << format_double(f.at(k, n)) << '\n';
    }
}

void write_field_csv(const ScalarField& f, const std::string& path) {
  std::ostringstream os;
  write_field_csv(f, os);
  write_file_atomic(path, os.str());
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_file_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write: " + tmp);
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0)
    throw std::runtime_error("cannot rename into place: " + path);
}

}  // namespace pmelab
