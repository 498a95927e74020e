#include "lpmlab/symmetry.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>

namespace lpm {

namespace {

constexpr double kPhi = std::numbers::phi;
constexpr double kPi = std::numbers::pi;

Vec vec(std::initializer_list<double> v) {
  Vec out(static_cast<Index>(v.size()));
  Index i = 0;
  for (double a : v) out[i++] = a;
  return out;
}

// All sign patterns of v on its nonzero entries.
void push_signed(std::vector<Vec>& out, const Vec& v) {
  std::vector<Index> nz;
  for (Index i = 0; i < v.size(); ++i)
    if (v[i] != 0) nz.push_back(i);
  for (unsigned mask = 0; mask < (1u << nz.size()); ++mask) {
    Vec w = v;
    for (size_t b = 0; b < nz.size(); ++b)
      if (mask & (1u << b)) w[nz[b]] = -w[nz[b]];
    out.push_back(w);
  }
}

Vec permute(const Vec& v, const std::vector<int>& perm) {
  Vec w(v.size());
  for (Index i = 0; i < v.size(); ++i) w[perm[i]] = v[i];
  return w;
}

std::vector<std::vector<int>> permutations(int d, bool even_only) {
  std::vector<int> p(d);
  for (int i = 0; i < d; ++i) p[i] = i;
  std::vector<std::vector<int>> out;
  do {
    int inv = 0;
    for (int a = 0; a < d; ++a)
      for (int b = a + 1; b < d; ++b) inv += p[a] > p[b];
    if (!even_only || inv % 2 == 0) out.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  return out;
}

// Unique vectors up to 1e-9.
std::vector<Vec> unique_points(const std::vector<Vec>& in) {
  std::vector<Vec> out;
  for (const Vec& v : in) {
    bool seen = false;
    for (const Vec& u : out)
      if ((u - v).cwiseAbs().maxCoeff() < 1e-9) {
        seen = true;
        break;
      }
    if (!seen) out.push_back(v);
  }
  return out;
}

std::vector<Vec> simplex_vertices(int n) {
  const int d = n + 1;
  const double lam = std::sqrt(n + 2.0) - 1;
  const double f = std::sqrt((n + 2.0) / (n + 3 - 2 * std::sqrt(n + 2.0)));
  const Vec ve = Vec::Ones(d);
  std::vector<Vec> v{ve};
  for (int j = 0; j < d; ++j) {
    Vec xe = Vec::Zero(d);
    xe[j] = lam;
    v.push_back(ve + (xe - ve) * f);
  }
  return v;
}

std::vector<Vec> cube_vertices(int d) {
  std::vector<Vec> v;
  push_signed(v, Vec::Ones(d));
  return v;
}

std::vector<Vec> cross_vertices(int d) {
  std::vector<Vec> v;
  for (int i = 0; i < d; ++i) {
    Vec e = Vec::Zero(d);
    e[i] = 1;
    v.push_back(e);
    v.push_back(-e);
  }
  return v;
}

std::vector<Vec> cyclic_signed(const Vec& base) {
  std::vector<Vec> v;
  Vec b = base;
  for (int r = 0; r < 3; ++r) {
    push_signed(v, b);
    b = vec({b[2], b[0], b[1]});
  }
  return v;
}

std::vector<Vec> dodecahedron_vertices() {
  std::vector<Vec> v = cube_vertices(3);
  for (const Vec& w : cyclic_signed(vec({0, 1 / kPhi, kPhi}))) v.push_back(w);
  return v;
}

// Dual of the dodecahedron above: directions of its pentagon centers.
std::vector<Vec> icosahedron_vertices() {
  std::vector<Vec> v = cyclic_signed(vec({0, kPhi, 1}));
  for (Vec& w : v) w.normalize();
  return v;
}

std::vector<Vec> hexacosichoron_vertices() {
  std::vector<Vec> v;
  push_signed(v, Vec::Constant(4, 0.5));
  for (const Vec& e : cross_vertices(4)) v.push_back(e);
  std::vector<Vec> base;
  push_signed(base, vec({0.5, kPhi / 2, 1 / (2 * kPhi), 0}));
  for (const auto& p : permutations(4, true))
    for (const Vec& b : base) v.push_back(permute(b, p));
  return unique_points(v);
}

// Normalized centroids of the tetrahedral cells of the 600-cell.
std::vector<Vec> hecatonicosachoron_vertices() {
  const std::vector<Vec> v = hexacosichoron_vertices();
  const size_t m = v.size();
  double best = -2;
  for (size_t j = 1; j < m; ++j) best = std::max(best, v[0].dot(v[j]));
  auto adj = [&](size_t a, size_t b) { return std::abs(v[a].dot(v[b]) - best) < 1e-9; };
  std::vector<Vec> out;
  for (size_t a = 0; a < m; ++a)
    for (size_t b = a + 1; b < m; ++b) {
      if (!adj(a, b)) continue;
      for (size_t c = b + 1; c < m; ++c) {
        if (!adj(a, c) || !adj(b, c)) continue;
        for (size_t d = c + 1; d < m; ++d)
          if (adj(a, d) && adj(b, d) && adj(c, d)) out.push_back((v[a] + v[b] + v[c] + v[d]).normalized());
      }
    }
  return out;
}

Mat swap_matrix(int d, int i, int j) {
  Mat m = Mat::Identity(d, d);
  m(i, i) = m(j, j) = 0;
  m(i, j) = m(j, i) = 1;
  return m;
}

Mat flip_matrix(int d, int i) {
  Mat m = Mat::Identity(d, d);
  m(i, i) = -1;
  return m;
}

// x_i -> x_{i+1}: the cyclic coordinate map.
Mat cyclic_matrix(int d) {
  Mat m = Mat::Zero(d, d);
  for (int i = 0; i < d; ++i) m((i + 1) % d, i) = 1;
  return m;
}

Mat reflection(const Vec& u) {
  const Vec n = u.normalized();
  return Mat::Identity(u.size(), u.size()) - 2 * n * n.transpose();
}

Mat rotation3(const Vec& axis, double angle) {
  const Eigen::Vector3d a = Eigen::Vector3d(axis[0], axis[1], axis[2]).normalized();
  return Eigen::AngleAxisd(angle, a).toRotationMatrix();
}

std::vector<long long> key_of(const Mat& m) {
  std::vector<long long> k(static_cast<size_t>(m.size()));
  for (Index i = 0; i < m.size(); ++i) k[static_cast<size_t>(i)] = std::llround(m.data()[i] * 1e6);
  return k;
}

}  // namespace

double Polytope::circumradius() const { return vertices.empty() ? 0 : vertices.front().norm(); }

Polytope good_position_polytope(int n, int k) {
  Polytope p;
  p.n = n;
  p.k = k;
  const int d = n + 1;
  auto bad = [&] {
    fail(ErrorCode::invalid_argument,
         "no regular polytope with " + std::to_string(k) + " vertices for n=" + std::to_string(n));
  };
  if (n == 1) {
    if (k < 3) bad();
    p.name = std::to_string(k) + "-gon";
    for (int j = 0; j < k; ++j) p.vertices.push_back(vec({std::cos(2 * kPi * j / k), std::sin(2 * kPi * j / k)}));
  } else if (n == 2) {
    switch (k) {
      case 4: p.name = "tetrahedron"; p.vertices = simplex_vertices(n); break;
      case 6: p.name = "octahedron"; p.vertices = cross_vertices(d); break;
      case 8: p.name = "cube"; p.vertices = cube_vertices(d); break;
      case 12: p.name = "icosahedron"; p.vertices = icosahedron_vertices(); break;
      case 20: p.name = "dodecahedron"; p.vertices = dodecahedron_vertices(); break;
      default: bad();
    }
  } else if (n == 3) {
    switch (k) {
      case 5: p.name = "4-simplex"; p.vertices = simplex_vertices(n); break;
      case 8: p.name = "16-cell"; p.vertices = cross_vertices(d); break;
      case 16: p.name = "tesseract"; p.vertices = cube_vertices(d); break;
      case 24: {
        p.name = "24-cell";
        p.vertices = cross_vertices(d);
        push_signed(p.vertices, Vec::Constant(4, 0.5));
        break;
      }
      case 120: p.name = "600-cell"; p.vertices = hexacosichoron_vertices(); break;
      case 600: p.name = "120-cell"; p.vertices = hecatonicosachoron_vertices(); break;
      default: bad();
    }
  } else {
    bad();
  }
  require(static_cast<int>(p.vertices.size()) == k, ErrorCode::invalid_argument,
          "vertex construction produced the wrong count for " + p.name);
  return p;
}

SymmetryGroup close_group(int n, const std::vector<Mat>& generators, const std::string& provenance,
                          size_t cap) {
  const int d = n + 1;
  SymmetryGroup g;
  g.n = n;
  g.provenance = provenance;
  std::map<std::vector<long long>, size_t> seen;
  auto insert = [&](const Mat& m) {
    auto key = key_of(m);
    auto it = seen.find(key);
    if (it != seen.end() && (g.elements[it->second] - m).cwiseAbs().maxCoeff() < 1e-10) return false;
    seen.emplace(std::move(key), g.elements.size());
    g.elements.push_back(m);
    return true;
  };
  insert(Mat::Identity(d, d));
  for (size_t i = 0; i < g.elements.size(); ++i) {
    for (const Mat& gen : generators) {
      if (insert(gen * g.elements[i]) && g.elements.size() > cap)
        fail(ErrorCode::invalid_argument,
             "group closure exceeded " + std::to_string(cap) + " elements (bad generators?)");
    }
  }
  return g;
}

SymmetryGroup symmetry_group(const Polytope& p, size_t cap) {
  const int d = p.n + 1;
  std::vector<Mat> gens;
  std::string prov;
  auto add_flips = [&] {
    for (int i = 0; i < d; ++i) gens.push_back(flip_matrix(d, i));
  };
  auto add_swaps = [&] {
    for (int i = 0; i + 1 < d; ++i) gens.push_back(swap_matrix(d, i, i + 1));
  };
  if (p.n == 1) {
    gens.push_back(rotation3(vec({0, 0, 1}), 2 * kPi / p.k).topLeftCorner(2, 2));
    gens.push_back(flip_matrix(2, 1));
    prov = "rotation by 2pi/k, reflection x2 -> -x2";
  } else if (p.name == "tetrahedron" || p.name == "4-simplex") {
    gens.push_back(cyclic_matrix(d));
    gens.push_back(swap_matrix(d, 0, 1));
    gens.push_back(reflection(p.vertices[0] - p.vertices[1]));
    prov = "cyclic coordinate map, swap x1 <-> x2, reflection exchanging two vertices";
  } else if (p.name == "octahedron" || p.name == "cube" || p.name == "16-cell" || p.name == "tesseract") {
    add_flips();
    add_swaps();
    prov = "sign flips, adjacent coordinate swaps";
  } else if (p.name == "icosahedron" || p.name == "dodecahedron") {
    add_flips();
    gens.push_back(cyclic_matrix(d));
    gens.push_back(rotation3(vec({0, kPhi, 1}), 2 * kPi / 5));
    prov = "sign flips, cyclic coordinate map, rotation by 2pi/5 about an icosahedron vertex";
  } else if (p.name == "24-cell") {
    add_flips();
    add_swaps();
    gens.push_back(reflection(Vec::Constant(4, 0.5)));
    prov = "sign flips, adjacent coordinate swaps, reflection across (1,1,1,1)^perp";
  } else {
    add_flips();
    gens.push_back(swap_matrix(d, 0, 1) * swap_matrix(d, 2, 3));
    gens.push_back(swap_matrix(d, 0, 2) * swap_matrix(d, 1, 3));
    gens.push_back(swap_matrix(d, 0, 1) * swap_matrix(d, 1, 2));
    gens.push_back(reflection(vec({0.5, kPhi / 2, 1 / (2 * kPhi), 0})));
    prov = "sign flips, even coordinate permutations, reflection across a 600-cell vertex";
  }
  return close_group(p.n, gens, p.name + ": " + prov, cap);
}

Vec pullback(const Grid& grid, const Vec& f, const Mat& g) {
  require(f.size() == grid.size(), ErrorCode::grid_mismatch, "field defined on a different grid");
  const Mat y = grid.points() * g.transpose();
  Vec out(grid.size());
  std::vector<Index> idx;
  std::vector<double> wt;
  Eigen::VectorXd yi(grid.ambient());
  for (Index i = 0; i < grid.size(); ++i) {
    yi = y.row(i).transpose();
    grid.stencil(yi.data(), idx, wt);
    double s = 0;
    for (size_t a = 0; a < idx.size(); ++a) s += wt[a] * f[idx[a]];
    out[i] = s;
  }
  return out;
}

Symmetrizer::Symmetrizer(GridPtr grid, SymmetryGroup group) : grid_(std::move(grid)), group_(std::move(group)) {
  require(group_.n == grid_->dim(), ErrorCode::invalid_argument, "symmetry group dimension does not match grid");
  const Index N = grid_->size();
  const double inv = 1.0 / static_cast<double>(group_.order());
  std::vector<Eigen::Triplet<double>> trips;
  std::vector<std::pair<Index, double>> row;
  std::vector<Index> idx;
  std::vector<double> wt;
  Eigen::VectorXd y(grid_->ambient());
  for (Index i = 0; i < N; ++i) {
    row.clear();
    const Eigen::VectorXd x = grid_->points().row(i).transpose();
    for (const Mat& g : group_.elements) {
      y = g * x;
      grid_->stencil(y.data(), idx, wt);
      for (size_t a = 0; a < idx.size(); ++a) row.emplace_back(idx[a], wt[a] * inv);
    }
    std::sort(row.begin(), row.end(), [](auto& a, auto& b) { return a.first < b.first; });
    for (size_t a = 0; a < row.size();) {
      size_t b = a;
      double s = 0;
      while (b < row.size() && row[b].first == row[a].first) s += row[b++].second;
      if (s != 0) trips.emplace_back(i, row[a].first, s);
      a = b;
    }
  }
  avg_.resize(N, N);
  avg_.setFromTriplets(trips.begin(), trips.end());
}

Vec Symmetrizer::apply(const Vec& h) const {
  require(h.size() == grid_->size(), ErrorCode::grid_mismatch, "field defined on a different grid");
  Vec out = avg_ * h;
  const double shift = (integrate(*grid_, h) - integrate(*grid_, out)) / grid_->weights().sum();
  out.array() += shift;
  return out;
}

SupportFunction Symmetrizer::apply(const SupportFunction& h) const {
  require(h.grid_ptr() == grid_, ErrorCode::grid_mismatch, "support function defined on a different grid");
  return SupportFunction(grid_, apply(h.values()));
}

SupportFunction symmetrize(const SupportFunction& h, const SymmetryGroup& g) {
  return Symmetrizer(h.grid_ptr(), g).apply(h);
}

double invariance_defect(const SupportFunction& h, const SymmetryGroup& g) {
  double d = 0;
  for (const Mat& m : g.elements)
    d = std::max(d, (pullback(h.grid(), h.values(), m) - h.values()).cwiseAbs().maxCoeff());
  return d;
}

Orthonormality orthonormality_check(const SupportFunction& h) {
  const Grid& g = h.grid();
  require(h.convex(), ErrorCode::nonconvex, "orthonormality check needs a convex body");
  // h^-2 dV = h^-1 detA w
  const Vec dens = h.det_a().cwiseQuotient(h.values()).cwiseProduct(g.weights());
  const Mat& x = g.points();
  Orthonormality o;
  o.m = x.transpose() * dens.asDiagonal() * x;
  o.w = x.transpose() * dens;
  o.h_minus2 = dens.sum();
  o.expected = o.h_minus2 / (g.dim() + 1);
  return o;
}

std::string group_json(const SymmetryGroup& g) {
  nlohmann::ordered_json j;
  j["n"] = g.n;
  j["order"] = g.order();
  j["provenance"] = g.provenance;
  auto& els = j["elements"] = nlohmann::ordered_json::array();
  for (const Mat& m : g.elements) {
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (Index r = 0; r < m.rows(); ++r) {
      nlohmann::ordered_json row = nlohmann::ordered_json::array();
      for (Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
      rows.push_back(row);
    }
    els.push_back(rows);
  }
  return j.dump(1);
}

void write_vertices_csv(const std::string& path, const Polytope& p) {
  std::ofstream os(path);
  require(static_cast<bool>(os), ErrorCode::io, "cannot write " + path);
  for (int i = 0; i <= p.n; ++i) os << (i ? ",x" : "x") << i + 1;
  os << '\n';
  for (const Vec& v : p.vertices) {
    for (Index i = 0; i < v.size(); ++i) os << (i ? "," : "") << format_number(v[i]);
    os << '\n';
  }
}

}  // namespace lpm
