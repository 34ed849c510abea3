#include <sstream>
#include <vector>

#include "mancova/simulation.hpp"

namespace mancova {

namespace {

Matrix compound_symmetry(int p, double diag) {
  Matrix s = Matrix::Constant(p, p, 0.5);
  for (int k = 0; k < p; ++k) s(k, k) = diag;
  return s;
}

Matrix singular_p2() {
  Matrix s(2, 2);
  s << 1.0, 0.5, 0.5, 0.25;
  return s;
}

Matrix singular_p4() {
  Matrix s(4, 4);
  s << 1.0, 1.0, 1.0, 0.5,  //
      1.0, 1.0, 1.0, 0.5,   //
      1.0, 1.0, 1.0, 0.5,   //
      0.5, 0.5, 0.5, 1.0;
  return s;
}

Matrix singular_p8() {
  Matrix s = Matrix::Constant(8, 8, 0.5);
  s.topLeftCorner(5, 5).setOnes();
  for (int k = 5; k < 8; ++k) s(k, k) = 1.0;
  return s;
}

Matrix rohwer_high_regular() {
  Matrix s(2, 2);
  s << 145.88, 113.18, 113.18, 1073.21;
  return s;
}

Matrix rohwer_low_regular() {
  Matrix s(2, 2);
  s << 99.07, 60.85, 60.85, 458.41;
  return s;
}

// Covariance of (Y1, Y2, Y1 + Y2): augmenting by the exact sums keeps the
// matrix singular to machine precision, which the rounded published
// versions of these matrices are not.
Matrix augment_with_sum(const Matrix& s2) {
  Matrix s(3, 3);
  s.topLeftCorner(2, 2) = s2;
  for (int k = 0; k < 2; ++k) {
    s(2, k) = s2(0, k) + s2(1, k);
    s(k, 2) = s(2, k);
  }
  s(2, 2) = s(2, 0) + s(2, 1);
  return s;
}

Matrix rohwer_high_singular() { return augment_with_sum(rohwer_high_regular()); }

Matrix rohwer_low_singular() { return augment_with_sum(rohwer_low_regular()); }

Vector concat(const std::vector<double>& v) {
  Vector out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out(i) = v[i];
  return out;
}

// Regression coefficient vectors, covariate-major coordinate-minor.
Vector nu_for(int p, bool singular) {
  if (p == 2)
    return singular ? concat({-0.5, -1.0, 1.5, 3.0})
                    : concat({-0.5, -1.0, 1.5, 1.0});
  if (p == 3)  // Rohwer-style sum outcome: third coefficient is the sum
    return singular ? concat({-0.5, -1.0, -1.5, 1.5, 1.0, 2.5})
                    : concat({-0.5, -1.0, -1.5, 1.5, 1.0, 2.5});
  if (p == 4)
    return singular
               ? concat({-0.5, -1.0, -1.5, -0.02, 1.5, 3.0, 4.5, 0.2})
               : concat({-0.5, -1.0, -2.0, -0.02, 1.5, 1.0, 1.0, 0.2});
  if (p == 8) {  // dimension-8 runs reuse the 4-dimensional pattern twice
    Vector base = nu_for(4, singular);
    Vector out(16);
    out << base.head(4), base.head(4), base.tail(4), base.tail(4);
    return out;
  }
  throw UnknownScenarioPreset("no preset nu for p=" + std::to_string(p));
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  for (char ch : s) {
    if (ch == sep) {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  parts.push_back(cur);
  return parts;
}

int parse_size(const std::string& s, const std::string& name) {
  try {
    int v = std::stoi(s);
    if (v < 1) throw std::invalid_argument("non-positive");
    return v;
  } catch (const std::exception&) {
    throw UnknownScenarioPreset("bad group size in preset name: " + name);
  }
}

std::vector<Matrix> scenario_sigmas(const std::string& scn, int a, int p,
                                    const std::string& name) {
  std::vector<Matrix> sigmas;
  for (int i = 0; i < a; ++i) {
    if (scn == "I") {
      sigmas.push_back(compound_symmetry(p, 1.0));
    } else if (scn == "II") {
      sigmas.push_back(compound_symmetry(p, i + 1.0));
    } else if (scn == "III") {
      if (p == 2) sigmas.push_back(singular_p2());
      else if (p == 4) sigmas.push_back(singular_p4());
      else if (p == 8) sigmas.push_back(singular_p8());
      else throw UnknownScenarioPreset("no singular scenario for " + name);
    } else {
      throw UnknownScenarioPreset("unknown covariance scenario in " + name);
    }
  }
  return sigmas;
}

ScenarioConfig base_config(const std::string& name, int a, int p,
                           std::vector<int> sizes) {
  ScenarioConfig cfg;
  cfg.name = name;
  cfg.a = a;
  cfg.p = p;
  cfg.c = 2;
  cfg.group_sizes = std::move(sizes);
  cfg.mus.assign(a, Vector::Zero(p));
  return cfg;
}

}  // namespace

ScenarioConfig preset(const std::string& name) {
  const std::vector<std::string> parts = split(name, '-');
  const std::string& family = parts.empty() ? std::string() : parts[0];

  if (family == "table1" || family == "table3") {
    // a=2 with p=2 (table1) or p=4 (table3); parts: family-scn-dist-n1-n2
    if (parts.size() != 5)
      throw UnknownScenarioPreset("expected " + family +
                                  "-<scenario>-<dist>-<n1>-<n2>: " + name);
    const int p = family == "table1" ? 2 : 4;
    const bool singular = parts[1] == "III";
    std::vector<int> sizes{parse_size(parts[3], name),
                           parse_size(parts[4], name)};
    ScenarioConfig cfg = base_config(name, 2, p, std::move(sizes));
    cfg.sigmas = scenario_sigmas(parts[1], 2, p, name);
    cfg.errors = error_distribution_from_string(parts[2]);
    cfg.nu = nu_for(p, singular);
    if (singular && p == 2) cfg.power_direction = concat({1.0, 1.0});
    return cfg;
  }

  if (family == "table2") {
    // a=4, p=2; parts: table2-scn-dist-sizes with sizes one of n1..n4
    if (parts.size() != 4)
      throw UnknownScenarioPreset(
          "expected table2-<scenario>-<dist>-<n1|n2|n3|n4>: " + name);
    std::vector<int> sizes;
    if (parts[3] == "n1") sizes = {30, 30, 30, 30};
    else if (parts[3] == "n2") sizes = {15, 15, 15, 15};
    else if (parts[3] == "n3") sizes = {5, 10, 20, 25};
    else if (parts[3] == "n4") sizes = {25, 20, 10, 5};
    else throw UnknownScenarioPreset("unknown size set in " + name);
    const bool singular = parts[1] == "III";
    ScenarioConfig cfg = base_config(name, 4, 2, std::move(sizes));
    cfg.sigmas = scenario_sigmas(parts[1], 4, 2, name);
    cfg.errors = error_distribution_from_string(parts[2]);
    cfg.nu = nu_for(2, singular);
    if (singular) cfg.power_direction = concat({1.0, 1.0});
    return cfg;
  }

  if (family == "tableS1") {
    // a=2, p=8, the homoskedastic singular structure; tableS1-dist-n1-n2
    if (parts.size() != 4)
      throw UnknownScenarioPreset("expected tableS1-<dist>-<n1>-<n2>: " +
                                  name);
    std::vector<int> sizes{parse_size(parts[2], name),
                           parse_size(parts[3], name)};
    ScenarioConfig cfg = base_config(name, 2, 8, std::move(sizes));
    cfg.sigmas.assign(2, singular_p8());
    cfg.errors = error_distribution_from_string(parts[1]);
    cfg.nu = nu_for(8, true);
    return cfg;
  }

  if (family == "table5") {
    // Achievement-test covariance structures; table5-{R,S}-dist-n1-n2
    if (parts.size() != 5)
      throw UnknownScenarioPreset("expected table5-<R|S>-<dist>-<n1>-<n2>: " +
                                  name);
    const bool singular = parts[1] == "S";
    if (!singular && parts[1] != "R")
      throw UnknownScenarioPreset("unknown table5 variant in " + name);
    const int p = singular ? 3 : 2;
    std::vector<int> sizes{parse_size(parts[3], name),
                           parse_size(parts[4], name)};
    ScenarioConfig cfg = base_config(name, 2, p, std::move(sizes));
    if (singular)
      cfg.sigmas = {rohwer_high_singular(), rohwer_low_singular()};
    else
      cfg.sigmas = {rohwer_high_regular(), rohwer_low_regular()};
    cfg.errors = error_distribution_from_string(parts[2]);
    cfg.nu = nu_for(p, singular);
    if (singular) cfg.power_direction = concat({1.0, 0.0, 1.0});
    return cfg;
  }

  throw UnknownScenarioPreset("unknown preset: " + name);
}

std::vector<std::string> preset_names() {
  std::vector<std::string> names;
  const std::vector<std::string> scns{"I", "II", "III"};
  const std::vector<std::string> dists{"normal", "chisq5", "lognormal",
                                       "doubleexp"};
  const std::vector<std::string> pairs{"20-20", "10-10", "10-20", "20-10"};
  for (const auto& s : scns)
    for (const auto& d : dists)
      for (const auto& n : pairs) {
        names.push_back("table1-" + s + "-" + d + "-" + n);
        names.push_back("table3-" + s + "-" + d + "-" + n);
      }
  for (const auto& s : scns)
    for (const auto& d : dists)
      for (const auto& n : {"n1", "n2", "n3", "n4"})
        names.push_back("table2-" + s + "-" + d + "-" + n);
  for (const auto& d : dists)
    for (const auto& n : pairs) names.push_back("tableS1-" + d + "-" + n);
  for (const auto& v : {"R", "S"})
    for (const auto& d : dists)
      for (const auto& n : {"32-37", "23-46", "46-23"})
        names.push_back("table5-" + std::string(v) + "-" + d + "-" + n);
  return names;
}

}  // namespace mancova
