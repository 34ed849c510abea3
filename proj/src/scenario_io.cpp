#include "mancova/scenario_io.hpp"

#include <fstream>
#include <map>
#include <sstream>

#include "mancova/csv.hpp"

namespace mancova {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& v, const std::string& field) {
  const char* begin = v.c_str();
  char* end = nullptr;
  double x = std::strtod(begin, &end);
  if (end == begin || *trim(end).c_str() != '\0')
    throw ConfigParse(field + ": not a number: '" + v + "'");
  return x;
}

long parse_long(const std::string& v, const std::string& field) {
  try {
    std::size_t pos = 0;
    long x = std::stol(trim(v), &pos);
    if (pos != trim(v).size()) throw std::invalid_argument("trailing");
    return x;
  } catch (const std::exception&) {
    throw ConfigParse(field + ": not an integer: '" + v + "'");
  }
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

Vector parse_vector(const std::string& v, const std::string& field) {
  std::vector<double> vals;
  for (const std::string& part : split(v, ','))
    vals.push_back(parse_double(trim(part), field));
  Vector out(vals.size());
  for (std::size_t i = 0; i < vals.size(); ++i) out(i) = vals[i];
  return out;
}

Matrix parse_matrix(const std::string& v, const std::string& field) {
  std::vector<Vector> rows;
  for (const std::string& line : split(v, ';'))
    rows.push_back(parse_vector(trim(line), field));
  const long cols = rows.empty() ? 0 : rows[0].size();
  Matrix out(rows.size(), cols);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != cols)
      throw ConfigParse(field + ": ragged matrix rows");
    out.row(r) = rows[r].transpose();
  }
  return out;
}

}  // namespace

ScenarioConfig parse_scenario_text(const std::string& text,
                                   const std::string& origin) {
  std::map<std::string, std::string> kv;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    std::size_t eq = t.find('=');
    if (eq == std::string::npos)
      throw ConfigParse(origin + ":" + std::to_string(line_no) +
                        ": expected key = value");
    std::string key = trim(t.substr(0, eq));
    std::string value = trim(t.substr(eq + 1));
    if (kv.count(key))
      throw ConfigParse(origin + ": duplicate key '" + key + "'");
    kv[key] = value;
  }

  auto take = [&kv](const std::string& key) {
    auto it = kv.find(key);
    if (it == kv.end()) throw ConfigParse("missing required field: " + key);
    std::string v = it->second;
    kv.erase(it);
    return v;
  };
  auto take_optional = [&kv](const std::string& key, const std::string& dflt) {
    auto it = kv.find(key);
    if (it == kv.end()) return dflt;
    std::string v = it->second;
    kv.erase(it);
    return v;
  };

  ScenarioConfig cfg;
  cfg.name = take_optional("name", "custom");
  cfg.a = static_cast<int>(parse_long(take("a"), "a"));
  cfg.p = static_cast<int>(parse_long(take("p"), "p"));
  cfg.c = static_cast<int>(parse_long(take("c"), "c"));
  {
    Vector sizes = parse_vector(take("group_sizes"), "group_sizes");
    for (int i = 0; i < sizes.size(); ++i)
      cfg.group_sizes.push_back(static_cast<int>(sizes(i)));
  }
  for (int i = 1; i <= cfg.a; ++i) {
    const std::string field = "sigma_" + std::to_string(i);
    cfg.sigmas.push_back(parse_matrix(take(field), field));
  }
  cfg.errors =
      error_distribution_from_string(take_optional("error_distribution",
                                                   "normal"));
  if (cfg.c > 0) cfg.nu = parse_vector(take("nu"), "nu");
  else cfg.nu = Vector(0);
  for (int i = 1; i <= cfg.a; ++i) {
    const std::string field = "mu_" + std::to_string(i);
    auto it = kv.find(field);
    if (it == kv.end()) {
      cfg.mus.push_back(Vector::Zero(cfg.p));
    } else {
      cfg.mus.push_back(parse_vector(it->second, field));
      kv.erase(it);
    }
  }
  cfg.covariate_rule =
      covariate_rule_from_string(take_optional("covariate_rule", "grid"));
  cfg.n_sim = static_cast<int>(parse_long(take_optional("n_sim", "2000"),
                                          "n_sim"));
  cfg.n_boot = static_cast<int>(parse_long(take_optional("n_boot", "1000"),
                                           "n_boot"));
  cfg.alpha = parse_double(take_optional("alpha", "0.05"), "alpha");
  cfg.seed = static_cast<std::uint64_t>(
      parse_long(take_optional("seed", "0"), "seed"));
  {
    std::string methods = take_optional("methods", "WI,WT,MW,MP");
    cfg.methods.clear();
    for (const std::string& m : split(methods, ','))
      cfg.methods.push_back(method_from_string(trim(m)));
  }
  {
    std::string flavor = take_optional("flavor", "hc4");
    if (flavor == "hc4") cfg.flavor = HcFlavor::HC4;
    else if (flavor == "hc0") cfg.flavor = HcFlavor::HC0;
    else throw ConfigParse("flavor: expected hc0 or hc4");
  }
  cfg.threads = static_cast<int>(parse_long(take_optional("threads", "0"),
                                            "threads"));
  {
    std::string dir = take_optional("power_direction", "");
    if (!dir.empty()) cfg.power_direction = parse_vector(dir, "power_direction");
  }
  if (!kv.empty())
    throw ConfigParse("unknown field: " + kv.begin()->first);
  cfg.validate();
  return cfg;
}

ScenarioConfig parse_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigParse("cannot open scenario file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario_text(buf.str(), path);
}

std::string scenario_text(const ScenarioConfig& cfg) {
  std::ostringstream out;
  out << "name = " << cfg.name << '\n';
  out << "a = " << cfg.a << '\n';
  out << "p = " << cfg.p << '\n';
  out << "c = " << cfg.c << '\n';
  out << "group_sizes = ";
  for (std::size_t i = 0; i < cfg.group_sizes.size(); ++i)
    out << (i ? "," : "") << cfg.group_sizes[i];
  out << '\n';
  for (int i = 0; i < cfg.a; ++i) {
    out << "sigma_" << i + 1 << " = ";
    for (int r = 0; r < cfg.sigmas[i].rows(); ++r) {
      if (r) out << "; ";
      for (int ccol = 0; ccol < cfg.sigmas[i].cols(); ++ccol)
        out << (ccol ? "," : "") << csv::format_double(cfg.sigmas[i](r, ccol));
    }
    out << '\n';
  }
  out << "error_distribution = " << to_string(cfg.errors) << '\n';
  if (cfg.c > 0) {
    out << "nu = ";
    for (int i = 0; i < cfg.nu.size(); ++i)
      out << (i ? "," : "") << csv::format_double(cfg.nu(i));
    out << '\n';
  }
  for (int i = 0; i < cfg.a; ++i) {
    out << "mu_" << i + 1 << " = ";
    for (int k = 0; k < cfg.p; ++k)
      out << (k ? "," : "") << csv::format_double(cfg.mus[i](k));
    out << '\n';
  }
  out << "covariate_rule = " << to_string(cfg.covariate_rule) << '\n';
  out << "n_sim = " << cfg.n_sim << '\n';
  out << "n_boot = " << cfg.n_boot << '\n';
  out << "alpha = " << csv::format_double(cfg.alpha) << '\n';
  out << "seed = " << cfg.seed << '\n';
  out << "methods = ";
  for (std::size_t i = 0; i < cfg.methods.size(); ++i)
    out << (i ? "," : "") << to_string(cfg.methods[i]);
  out << '\n';
  out << "flavor = " << to_string(cfg.flavor) << '\n';
  out << "threads = " << cfg.threads << '\n';
  if (cfg.power_direction.size() > 0) {
    out << "power_direction = ";
    for (int i = 0; i < cfg.power_direction.size(); ++i)
      out << (i ? "," : "") << csv::format_double(cfg.power_direction(i));
    out << '\n';
  }
  return out.str();
}

}  // namespace mancova
