#include "qsm/cohomology.hpp"

#include <sstream>

#include "qsm/errors.hpp"

namespace qsm {

Cohomology::Cohomology(const FreeCDGA& A) : A_(&A) {
  check_internal(A.cap >= 1, "cohomology needs cap >= 1");
  data_.resize(static_cast<std::size_t>(A.cap));
}

Cohomology::DegreeData& Cohomology::at(int n) {
  check_internal(n >= 0 && n <= max_degree(), "cohomology degree out of range");
  DegreeData& D = data_[static_cast<std::size_t>(n)];
  if (D.ready) return D;
  D.basis = A_->basis(n);
  D.coboundaries = RowSpace(D.basis.size());
  if (n >= 1) {
    for (const Monomial& m : A_->basis(n - 1)) {
      Polynomial dm = A_->d(mono_poly(m, Q(1)));
      if (!poly_is_zero(dm)) D.coboundaries.add(poly_coords(A_->T, dm, D.basis));
    }
  }
  // Kernel of d : degree n -> degree n+1.
  std::vector<Monomial> target = A_->basis(n + 1);
  Mat dmat(target.size(), zero_vec(D.basis.size()));
  for (std::size_t j = 0; j < D.basis.size(); ++j) {
    Polynomial dm = A_->d(mono_poly(D.basis[j], Q(1)));
    Vec col = poly_coords(A_->T, dm, target);
    for (std::size_t i = 0; i < target.size(); ++i) dmat[i][j] = col[i];
  }
  std::vector<Vec> kern = kernel_basis(dmat, D.basis.size());
  // Residuals of kernel vectors against coboundaries, in echelon form, give
  // the canonical class representatives.
  RowSpace reps(D.basis.size());
  for (const Vec& k : kern) {
    Vec r = D.coboundaries.residual(k);
    reps.add(std::move(r));
  }
  D.rep_space = reps;
  for (const Vec& row : D.rep_space.rows()) {
    D.rep_residuals.push_back(row);
    D.reps.push_back(coords_poly(D.basis, row));
  }
  D.ready = true;
  return D;
}

int Cohomology::dim(int n) { return static_cast<int>(at(n).reps.size()); }

const std::vector<Polynomial>& Cohomology::reps(int n) { return at(n).reps; }

const std::vector<Monomial>& Cohomology::mono_basis(int n) { return at(n).basis; }

Vec Cohomology::class_coords(const Polynomial& z, int n) {
  DegreeData& D = at(n);
  check_internal(poly_is_zero(z) || poly_degree(A_->T, z) == n,
                 "class_coords: wrong degree");
  check_internal(poly_is_zero(A_->d(z)), "class_coords: not a cocycle");
  Vec v = D.coboundaries.residual(poly_coords(A_->T, z, D.basis));
  // Express against the echelon representative rows.
  Vec coords = zero_vec(D.reps.size());
  const auto& rows = D.rep_space.rows();
  for (std::size_t i = 0; i < rows.size(); ++i) {
    // Pivot of row i: first nonzero entry (rows are monic echelon).
    std::size_t p = 0;
    while (p < rows[i].size() && sgn(rows[i][p]) == 0) ++p;
    if (p == rows[i].size()) continue;
    Q c = v[p];
    if (sgn(c) != 0) {
      coords[i] = c;
      for (std::size_t j = 0; j < v.size(); ++j) v[j] -= c * rows[i][j];
    }
  }
  check_internal(is_zero_vec(v), "class_coords: vector outside class space");
  return coords;
}

bool Cohomology::is_coboundary(const Polynomial& z, int n) {
  return is_zero_vec(class_coords(z, n));
}

CupLength cup_length(const FreeCDGA& A) {
  Cohomology H(A);
  const int top = H.max_degree();
  CupLength out;
  // Stage 1: all positive-degree classes.
  struct Stage {
    // per degree: representative polynomials spanning the stage
    std::vector<std::vector<Polynomial>> reps;
    bool empty = true;
  };
  auto make_stage = [&]() {
    Stage s;
    s.reps.resize(static_cast<std::size_t>(top) + 1);
    return s;
  };
  Stage cur = make_stage();
  for (int n = 1; n <= top; ++n) {
    for (const Polynomial& r : H.reps(n)) {
      cur.reps[static_cast<std::size_t>(n)].push_back(r);
      cur.empty = false;
    }
  }
  if (cur.empty) return out;  // H^+ = 0: cup length 0
  int length = 1;
  bool skipped_above_cap = false;
  while (true) {
    Stage next = make_stage();
    bool skipped = false;
    std::vector<RowSpace> spans;
    for (int n = 0; n <= top; ++n)
      spans.emplace_back(static_cast<std::size_t>(H.dim(n)));
    for (int a = 1; a <= top; ++a) {
      for (const Polynomial& pa : cur.reps[static_cast<std::size_t>(a)]) {
        for (int b = 1; b <= top; ++b) {
          if (H.dim(b) == 0) continue;
          if (a + b > top) {
            skipped = true;
            continue;
          }
          for (const Polynomial& pb : H.reps(b)) {
            Polynomial prod = poly_mul(A.T, pa, pb);
            Vec cls = H.class_coords(prod, a + b);
            if (!is_zero_vec(cls) && spans[static_cast<std::size_t>(a + b)].add(cls)) {
              next.reps[static_cast<std::size_t>(a + b)].push_back(prod);
              next.empty = false;
            }
          }
        }
      }
    }
    skipped_above_cap = skipped_above_cap || skipped;
    if (next.empty) break;
    ++length;
    cur = std::move(next);
    if (length > top) break;  // cannot exceed top degree with degree >= 1 factors
  }
  out.value = length;
  out.within_cap_only = skipped_above_cap;
  return out;
}

FreenessReport cohomology_freeness(const FreeCDGA& A) {
  Cohomology H(A);
  const int top = H.max_degree();
  FreenessReport rep;
  // Choose one generator per indecomposable class, degree by degree.
  struct Gen {
    Polynomial poly;
    int degree;
    std::string name;
  };
  std::vector<Gen> gens;
  for (int n = 1; n <= top; ++n) {
    int hn = H.dim(n);
    if (hn == 0) continue;
    RowSpace dec(static_cast<std::size_t>(hn));
    for (int a = 1; a < n; ++a) {
      int b = n - a;
      if (b < 1 || H.dim(a) == 0 || H.dim(b) == 0) continue;
      for (const Polynomial& pa : H.reps(a))
        for (const Polynomial& pb : H.reps(b))
          dec.add(H.class_coords(poly_mul(A.T, pa, pb), n));
    }
    for (int j = 0; j < hn; ++j) {
      Vec e = zero_vec(static_cast<std::size_t>(hn));
      e[static_cast<std::size_t>(j)] = 1;
      if (dec.add(e)) {
        Gen g;
        g.poly = H.reps(n)[static_cast<std::size_t>(j)];
        g.degree = n;
        g.name = "e" + std::to_string(gens.size() + 1);
        gens.push_back(std::move(g));
        rep.generator_degrees.push_back(n);
      }
    }
  }
  // Free graded-commutative algebra on the chosen generators.
  std::vector<Generator> fgens;
  for (std::size_t i = 0; i < gens.size(); ++i)
    fgens.push_back(Generator{static_cast<int>(i), gens[i].name, gens[i].degree});
  GenTable FT = make_gen_table(fgens);
  for (int n = 1; n <= top; ++n) {
    std::vector<Monomial> fmon = monomial_basis(FT, n);
    if (fmon.empty()) continue;
    Mat img;  // rows: H^n coords of each monomial image (transposed below)
    std::vector<Vec> cols;
    for (const Monomial& m : fmon) {
      Polynomial prod = mono_poly(Monomial{}, Q(1));
      for (int f : m.factors)
        prod = poly_mul(A.T, prod, gens[static_cast<std::size_t>(f)].poly);
      cols.push_back(H.class_coords(prod, n));
    }
    std::size_t hn = static_cast<std::size_t>(H.dim(n));
    Mat mat(hn, zero_vec(fmon.size()));
    for (std::size_t j = 0; j < cols.size(); ++j)
      for (std::size_t i = 0; i < hn; ++i) mat[i][j] = cols[j][i];
    // Surjectivity (sanity: generators were chosen to span indecomposables).
    check_internal(rank(mat) == static_cast<int>(hn),
                   "freeness: generators fail to span cohomology");
    std::vector<Vec> kern = kernel_basis(mat, fmon.size());
    if (!kern.empty()) {
      rep.free_within_cap = false;
      rep.failing_degree = n;
      // Monic witness in the free-algebra monomials.
      Polynomial w = coords_poly(fmon, kern.front());
      rep.relation = poly_to_string(FT, w);
      return rep;
    }
  }
  return rep;
}

}  // namespace qsm
