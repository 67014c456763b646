#pragma once

// CSV writers for the artifact's quantitative outputs and a reader for the
// round-trip checks. Floating-point formatting is fixed at 17 significant
// digits so identical runs produce byte-identical files.

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "ngplab/curve.hpp"
#include "ngplab/evolve.hpp"
#include "ngplab/field.hpp"

namespace ngplab::csv {

inline std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

class Writer {
 public:
  Writer(const std::string& path, const std::string& header) : out_(path) {
    if (!out_) throw std::runtime_error("csv: cannot open " + path);
    out_ << header << "\n";
  }
  void row(const std::vector<double>& values) {
    for (size_t i = 0; i < values.size(); ++i) out_ << (i ? "," : "") << fmt(values[i]);
    out_ << "\n";
  }

 private:
  std::ofstream out_;
};

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

inline Table read(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("csv: cannot open " + path);
  Table t;
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("csv: empty file " + path);
  std::stringstream hs(line);
  std::string cell;
  while (std::getline(hs, cell, ',')) t.header.push_back(cell);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ls(line);
    while (std::getline(ls, cell, ',')) row.push_back(std::stod(cell));
    if (row.size() != t.header.size())
      throw std::runtime_error("csv: ragged row in " + path);
    t.rows.push_back(std::move(row));
  }
  return t;
}

// Field dump: x,eta,w,re_u,im_u in ascending x.
inline void write_field(const std::string& path, const HydroField& h) {
  const ComplexField u = reconstruct_complex(h);
  Writer w(path, "x,eta,w,re_u,im_u");
  for (int j = 0; j < h.grid.n(); ++j)
    w.row({h.grid.x(j), h.eta[j], h.w[j], u.values[j].real(), u.values[j].imag()});
}

inline void write_field(const std::string& path, const ComplexField& c) {
  Writer w(path, "x,eta,w,re_u,im_u");
  const auto du = complex_derivative(c);
  for (int j = 0; j < c.grid.n(); ++j) {
    const double m2 = std::norm(c.values[j]);
    const double wj = m2 > 0 ? std::imag(std::conj(c.values[j]) * du[j]) / m2 : 0.0;
    w.row({c.grid.x(j), 1.0 - m2, wj, c.values[j].real(), c.values[j].imag()});
  }
}

// Curve dump: q,E,c_est,residual,converged,iterations.
inline void write_curve(const std::string& path, const std::vector<CurvePoint>& pts) {
  Writer w(path, "q,E,c_est,residual,converged,iterations");
  for (const auto& p : pts)
    w.row({p.q, p.E, p.c_est, p.residual_norm, p.converged ? 1.0 : 0.0,
           static_cast<double>(p.iterations)});
}

// Trajectory dump: t,E,p,min_modulus,dist.
inline void write_trajectory(const std::string& path, const TrajectorySummary& s) {
  Writer w(path, "t,E,p,min_modulus,dist");
  for (size_t i = 0; i < s.times.size(); ++i)
    w.row({s.times[i], s.energies[i], s.momenta[i], s.min_modulus[i], s.distances[i]});
}

}  // namespace ngplab::csv
