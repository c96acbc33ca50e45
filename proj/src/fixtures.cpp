#include "qsm/fixtures.hpp"

#include <algorithm>
#include <functional>

#include "qsm/cdga.hpp"
#include "qsm/errors.hpp"

namespace qsm::fixtures {

MinimalModel sphere(int n, int cap) {
  check_input(n >= 2, "sphere dimension must be >= 2");
  std::vector<Generator> g{{0, "x", n}};
  std::map<int, Polynomial> d;
  if (n % 2 == 0) {
    g.push_back({1, "y", 2 * n - 1});
    d[1] = mono_poly(Monomial{{0, 0}}, Q(1));
  }
  return make_minimal(make_cdga(std::move(g), std::move(d), cap));
}

MinimalModel projective(int n, int cap) {
  check_input(n >= 2, "projective space index must be >= 2");
  std::vector<Generator> g{{0, "x", 2}, {1, "y", 2 * n + 1}};
  std::map<int, Polynomial> d;
  d[1] = mono_poly(Monomial{std::vector<int>(static_cast<std::size_t>(n) + 1, 0)},
                   Q(1));
  return make_minimal(make_cdga(std::move(g), std::move(d), cap));
}

MinimalModel three_stage(int d1, int d2, int d3, int top, int cap) {
  check_input(top == d1 + d2 + d3 - 1,
              "three-stage model needs top = d1 + d2 + d3 - 1");
  std::vector<Generator> g{
      {0, "x1", d1}, {1, "x2", d2}, {2, "x3", d3}, {3, "y", top}};
  std::map<int, Polynomial> d;
  d[3] = mono_poly(Monomial{{0, 1, 2}}, Q(1));
  return make_minimal(make_cdga(std::move(g), std::move(d), cap));
}

MinimalModel cayley_plane(int cap) {
  std::vector<Generator> g{{0, "x", 8}, {1, "y", 23}};
  std::map<int, Polynomial> d;
  d[1] = mono_poly(Monomial{{0, 0, 0}}, Q(1));
  return make_minimal(make_cdga(std::move(g), std::move(d), cap));
}

MinimalModel depth_two(int cap) {
  std::vector<Generator> g{{0, "x", 3}, {1, "y", 3}, {2, "z", 5}, {3, "u", 7}};
  std::map<int, Polynomial> d;
  d[2] = mono_poly(Monomial{{0, 1}}, Q(1));
  d[3] = mono_poly(Monomial{{0, 2}}, Q(1));
  return make_minimal(make_cdga(std::move(g), std::move(d), cap));
}

std::vector<std::pair<std::string, MinimalModel>> target_suite(int cap) {
  std::vector<std::pair<std::string, MinimalModel>> out;
  for (int n = 2; n <= 8; ++n)
    out.emplace_back("S" + std::to_string(n), sphere(n, cap));
  for (int n = 2; n <= 4; ++n)
    out.emplace_back("CP" + std::to_string(n), projective(n, cap));
  out.emplace_back("three-stage(5,6,7,17)", three_stage(5, 6, 7, 17, cap));
  out.emplace_back("depth-two", depth_two(cap));
  return out;
}

FreeDGL sphere_source(int dim, int cap) {
  check_input(dim >= 2, "sphere dimension must be >= 2");
  return make_dgl({{0, "g", dim - 1}}, {}, std::max(cap, dim - 1));
}

FreeDGL wedge_source(const std::vector<int>& dims, int cap) {
  check_input(!dims.empty(), "wedge needs at least one sphere");
  std::vector<LieGenerator> g;
  int maxdeg = 1;
  for (std::size_t i = 0; i < dims.size(); ++i) {
    check_input(dims[i] >= 2, "sphere dimension must be >= 2");
    check_input(i == 0 || dims[i - 1] <= dims[i],
                "wedge dimensions must be non-decreasing");
    g.push_back({static_cast<int>(i), "g" + std::to_string(i), dims[i] - 1});
    maxdeg = std::max(maxdeg, dims[i] - 1);
  }
  return make_dgl(std::move(g), {}, std::max(cap, maxdeg));
}

FreeDGL projective_source(int n, int cap) {
  check_input(n >= 2 && n <= 4, "projective source supports n in 2..4");
  std::vector<LieGenerator> g{{0, "i", 1}, {1, "w", 3}};
  if (n >= 3) g.push_back({2, "u", 5});
  if (n >= 4) g.push_back({3, "a", 7});
  int c = std::max(cap, 2 * n - 1);
  FreeLie lie(g, c);
  auto br = [](BWord a, BWord b) { return BWord::br(std::move(a), std::move(b)); };
  std::map<int, LieElement> d;
  d[1] = lie.normalize(br(BWord::leaf(0), BWord::leaf(0)));
  if (n >= 3) d[2] = lie.normalize(br(BWord::leaf(0), BWord::leaf(1)));
  if (n >= 4)
    d[3] = lie.normalize(
        {{Q(1), br(BWord::leaf(0), BWord::leaf(2))},
         {Q(1, 4), br(BWord::leaf(1), BWord::leaf(1))}});
  return make_dgl(std::move(g), std::move(d), c);
}

FreeDGL two_planes_source(int cap) {
  std::vector<LieGenerator> g{
      {0, "i1", 1}, {1, "i2", 1}, {2, "w1", 3}, {3, "w2", 3}, {4, "w3", 3}};
  int c = std::max(cap, 3);
  FreeLie lie(g, c);
  std::map<int, LieElement> d;
  d[2] = lie.normalize(BWord::br(BWord::leaf(0), BWord::leaf(0)));
  d[3] = lie.normalize(BWord::br(BWord::leaf(1), BWord::leaf(1)));
  d[4] = lie.normalize(BWord::br(BWord::leaf(0), BWord::leaf(1)));
  return make_dgl(std::move(g), std::move(d), c);
}

FreeDGL iterated_family_source(int m0,
                               const std::vector<std::vector<int>>& stages,
                               int cap) {
  check_input(m0 >= 2, "base sphere dimension must be >= 2");
  // collect generators stage by stage, then sort by (degree, arrival)
  struct Raw {
    std::string name;
    int degree;
    BWord diff;   // attaching word; leaf(-1) means none
    bool has_diff;
  };
  std::vector<Raw> raw;
  raw.push_back({"a0", m0 - 1, BWord::leaf(-1), false});
  int alpha = 0;  // index into raw of the current alpha class
  int sphere_count = 0;
  for (const auto& stage : stages) {
    check_input(!stage.empty(), "each stage needs at least one sphere");
    std::vector<int> leaves;
    for (int m : stage) {
      check_input(m >= 2, "sphere dimension must be >= 2");
      raw.push_back({"b" + std::to_string(++sphere_count), m - 1,
                     BWord::leaf(-1), false});
      leaves.push_back(static_cast<int>(raw.size()) - 1);
    }
    // z = [alpha, [i_1, [... [i_{t-1}, i_t]]]]
    BWord w = BWord::leaf(leaves.back());
    for (std::size_t j = leaves.size() - 1; j-- > 0;)
      w = BWord::br(BWord::leaf(leaves[j]), std::move(w));
    w = BWord::br(BWord::leaf(alpha), std::move(w));
    int zdeg = raw[static_cast<std::size_t>(alpha)].degree;
    for (int m : stage) zdeg += m - 1;
    raw.push_back({"w" + std::to_string(raw.size()), zdeg + 1, std::move(w),
                   true});
    alpha = static_cast<int>(raw.size()) - 1;
  }
  std::vector<int> order(raw.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return raw[static_cast<std::size_t>(a)].degree <
           raw[static_cast<std::size_t>(b)].degree;
  });
  std::vector<int> new_id(raw.size());
  std::vector<LieGenerator> gens;
  int maxdeg = 1;
  for (std::size_t i = 0; i < order.size(); ++i) {
    const Raw& r = raw[static_cast<std::size_t>(order[i])];
    new_id[static_cast<std::size_t>(order[i])] = static_cast<int>(i);
    gens.push_back({static_cast<int>(i), r.name, r.degree});
    maxdeg = std::max(maxdeg, r.degree);
  }
  int c = std::max(cap, maxdeg);
  FreeLie lie(gens, c);
  std::function<BWord(const BWord&)> remap = [&](const BWord& w) -> BWord {
    if (w.is_leaf()) return BWord::leaf(new_id[static_cast<std::size_t>(w.gen)]);
    return BWord::br(remap(*w.l), remap(*w.r));
  };
  std::map<int, LieElement> d;
  for (std::size_t i = 0; i < raw.size(); ++i)
    if (raw[i].has_diff)
      d[new_id[i]] = lie.normalize(remap(raw[i].diff));
  return make_dgl(std::move(gens), std::move(d), c);
}

std::vector<std::pair<std::string, FreeDGL>> source_suite() {
  std::vector<std::pair<std::string, FreeDGL>> out;
  for (int n = 2; n <= 5; ++n)
    out.emplace_back("S" + std::to_string(n), sphere_source(n, n));
  for (int n = 2; n <= 4; ++n)
    out.emplace_back("CP" + std::to_string(n), projective_source(n, 2 * n));
  out.emplace_back("two-planes", two_planes_source(4));
  out.emplace_back("iterated(2;2,2)", iterated_family_source(2, {{2, 2}}, 5));
  return out;
}

}  // namespace qsm::fixtures
