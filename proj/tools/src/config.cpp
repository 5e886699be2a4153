#include "spdc_cli/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <fmt/format.h>

#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "spdc/errors.hpp"
#include "spdc/units.hpp"

namespace spdc::cli {

namespace pt = boost::property_tree;

std::string_view to_string(Command c) {
  switch (c) {
    case Command::PmfSlice: return "pmf-slice";
    case Command::Jsa: return "jsa";
    case Command::PuritySweep: return "purity-sweep";
    case Command::CompareModels: return "compare-models";
    case Command::Selftest: return "selftest";
  }
  return "?";
}

std::optional<Command> command_from_string(std::string_view s) {
  for (Command c : {Command::PmfSlice, Command::Jsa, Command::PuritySweep, Command::CompareModels, Command::Selftest})
    if (s == to_string(c)) return c;
  return std::nullopt;
}

std::uint64_t fnv1a(std::string_view text) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  return h;
}

std::string RunConfig::hash_hex() const { return fmt::format("{:016x}", hash); }

BiphotonModel RunConfig::model() const { return BiphotonModel(kind, pump, crystal, regime, guards); }

PuritySetting RunConfig::purity_setting() const {
  CollectionSpec c = collection;
  if (ws_over_wp) c.w0 = *ws_over_wp * pump.w_p;
  PuritySetting s{model(), c, quad, kernel};
  s.quad.threads = threads;
  return s;
}

namespace {

const std::map<std::string, std::set<std::string>>& schema() {
  static const std::map<std::string, std::set<std::string>> s = {
      {"", {"preset"}},
      {"pump", {"lambda_p", "w_p", "tau"}},
      {"crystal", {"preset", "type", "L", "n_p", "k_p", "vg_p", "vg_s", "vg_i", "gvd_p", "gvd_s", "gvd_i"}},
      {"model", {"kind", "kernel", "regime", "alpha", "beta", "q_max", "omega_fraction"}},
      {"collection", {"ell", "p", "w0", "ws_over_wp"}},
      {"sweep", {"axis", "values"}},
      {"grid",
       {"first", "first_min", "first_max", "first_points", "second", "second_min", "second_max", "second_points",
        "lambda_s", "lambda_i", "q_sx", "q_sy", "q_ix", "q_iy", "x_s", "x_i", "quantity", "pmf"}},
      {"quadrature",
       {"engine", "radial_order", "azimuthal_order", "spectral_order", "box_order", "tolerance", "max_refinements",
        "truncation", "sinc_margin", "radial_cutoff"}},
  };
  return s;
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::string unquote(std::string s) {
  s = trim(s);
  if (s.size() >= 2 && (s.front() == '"' || s.front() == '\'') && s.back() == s.front()) s = s.substr(1, s.size() - 2);
  return s;
}

// A top-level `crystal = <preset>` would clash with the [crystal] section.
std::string rewrite_top_level(std::istream& in) {
  std::ostringstream out;
  std::string line;
  bool in_section = false;
  while (std::getline(in, line)) {
    const std::string t = trim(line);
    if (!t.empty() && t.front() == '[') in_section = true;
    if (!in_section && !t.empty() && t.front() != '#' && t.front() != ';') {
      const auto eq = t.find('=');
      if (eq != std::string::npos && trim(t.substr(0, eq)) == "crystal") {
        out << "preset =" << t.substr(eq + 1) << '\n';
        continue;
      }
    }
    out << line << '\n';
  }
  return out.str();
}

class Reader {
 public:
  explicit Reader(pt::ptree tree) : tree_(std::move(tree)) { check(); }

  std::optional<std::string> str(const std::string& section, const std::string& key) const {
    const pt::ptree* node = &tree_;
    if (!section.empty()) {
      auto s = tree_.find(section);
      if (s == tree_.not_found()) return std::nullopt;
      node = &s->second;
    }
    auto it = node->find(key);
    if (it == node->not_found() || !it->second.empty()) return std::nullopt;
    return unquote(it->second.data());
  }

  std::optional<double> num(const std::string& section, const std::string& key) const {
    const auto s = str(section, key);
    if (!s) return std::nullopt;
    return parse_double(*s, field(section, key));
  }

  std::optional<int> integer(const std::string& section, const std::string& key) const {
    const auto s = str(section, key);
    if (!s) return std::nullopt;
    int v = 0;
    const auto [p, ec] = std::from_chars(s->data(), s->data() + s->size(), v);
    if (ec != std::errc() || p != s->data() + s->size())
      throw ValidationError("expected an integer, got '" + *s + "'", field(section, key));
    return v;
  }

  double require(const std::string& section, const std::string& key) const {
    const auto v = num(section, key);
    if (!v) throw ValidationError("missing required key", field(section, key));
    return *v;
  }

  bool has_section(const std::string& section) const { return tree_.find(section) != tree_.not_found(); }

  static std::string field(const std::string& section, const std::string& key) {
    return section.empty() ? key : section + "." + key;
  }

  static double parse_double(const std::string& s, const std::string& f) {
    double v = 0.0;
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size())
      throw ValidationError("expected a number, got '" + s + "'", f);
    return v;
  }

 private:
  void check() const {
    const auto& sc = schema();
    for (const auto& [name, node] : tree_) {
      if (node.empty()) {
        if (!sc.at("").count(name)) throw ValidationError("unknown top-level key", name);
        continue;
      }
      const auto it = sc.find(name);
      if (it == sc.end() || name.empty()) throw ValidationError("unknown section", "[" + name + "]");
      for (const auto& [key, child] : node)
        if (!it->second.count(key)) throw ValidationError("unknown key", name + "." + key);
    }
  }

  pt::ptree tree_;
};

std::string fmt_num(double v) { return fmt::format("{:.17g}", v); }

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::optional<PmfKind> pmf_kind_from_string(std::string_view s) {
  for (PmfKind k : {PmfKind::GeneralSinc, PmfKind::DoubleSinc, PmfKind::GaussianSubstitute})
    if (s == to_string(k)) return k;
  return std::nullopt;
}

bool is_wavelength(GridVariable v) { return v == GridVariable::LambdaS || v == GridVariable::LambdaI; }

// config units -> library units
double axis_to_internal(GridVariable v, double x) { return is_wavelength(v) ? units::nm_to_um(x) : x; }

double sweep_to_internal(SweepAxis a, double x) { return a == SweepAxis::Length ? units::mm_to_um(x) : x; }

void resolve_crystal(const Reader& r, RunConfig& c, std::map<std::string, std::string>& canon) {
  auto preset_name = r.str("crystal", "preset");
  if (const auto top = r.str("", "preset")) {
    if (preset_name && *preset_name != *top) throw ValidationError("conflicts with the top-level preset", "crystal.preset");
    preset_name = top;
  }
  bool dispersion_from_preset = false;
  if (preset_name) {
    const auto p = presets::crystal_preset(*preset_name);
    if (!p) throw ValidationError("unknown preset '" + *preset_name + "'", "crystal.preset");
    c.crystal = p->crystal;
    dispersion_from_preset = p->supplies_dispersion;
    canon["crystal.preset"] = *preset_name;
  }
  if (const auto t = r.str("crystal", "type")) {
    if (*t == "I")
      c.crystal.type = SpdcType::TypeI;
    else if (*t == "II")
      c.crystal.type = SpdcType::TypeII;
    else
      throw ValidationError("expected I or II, got '" + *t + "'", "crystal.type");
  } else if (!preset_name) {
    throw ValidationError("missing required key", "crystal.type");
  }
  if (const auto L = r.num("crystal", "L"))
    c.crystal.length = units::mm_to_um(*L);
  else if (!preset_name)
    throw ValidationError("missing required key", "crystal.L");
  if (const auto v = r.num("crystal", "n_p")) c.crystal.n_p = *v;
  if (const auto v = r.num("crystal", "k_p")) c.crystal.k_p = *v;
  if (!c.crystal.n_p && !c.crystal.k_p) throw ValidationError("missing required key (or give k_p)", "crystal.n_p");

  const bool type1 = c.crystal.type == SpdcType::TypeI;
  auto dispersion = [&](const char* key, double& slot, bool gvd, const char* fallback) {
    auto v = r.num("crystal", key);
    if (!v && type1 && fallback) v = r.num("crystal", fallback);
    if (v)
      slot = gvd ? units::gvd_per_mm_to_per_um(*v) : *v;
    else if (!dispersion_from_preset && std::string_view(key) != "gvd_p")
      throw ValidationError("missing required key", std::string("crystal.") + key);
  };
  dispersion("vg_p", c.crystal.vg_divisor_p, false, nullptr);
  dispersion("vg_s", c.crystal.vg_divisor_s, false, nullptr);
  dispersion("vg_i", c.crystal.vg_divisor_i, false, "vg_s");
  dispersion("gvd_p", c.crystal.gvd_p, true, nullptr);
  dispersion("gvd_s", c.crystal.gvd_s, true, nullptr);
  dispersion("gvd_i", c.crystal.gvd_i, true, "gvd_s");

  canon["crystal.type"] = type1 ? "I" : "II";
  canon["crystal.L_um"] = fmt_num(c.crystal.length);
  if (c.crystal.n_p) canon["crystal.n_p"] = fmt_num(*c.crystal.n_p);
  if (c.crystal.k_p) canon["crystal.k_p"] = fmt_num(*c.crystal.k_p);
  canon["crystal.vg_p"] = fmt_num(c.crystal.vg_divisor_p);
  canon["crystal.vg_s"] = fmt_num(c.crystal.vg_divisor_s);
  canon["crystal.vg_i"] = fmt_num(c.crystal.vg_divisor_i);
  canon["crystal.gvd_p"] = fmt_num(c.crystal.gvd_p);
  canon["crystal.gvd_s"] = fmt_num(c.crystal.gvd_s);
  canon["crystal.gvd_i"] = fmt_num(c.crystal.gvd_i);
}

void resolve_model(const Reader& r, RunConfig& c, std::map<std::string, std::string>& canon) {
  if (const auto k = r.str("model", "kind")) {
    const auto v = model_kind_from_string(*k);
    if (!v) throw ValidationError("unknown model kind '" + *k + "'", "model.kind");
    c.kind = *v;
  }
  if (const auto k = r.str("model", "kernel")) {
    const auto v = kernel_mode_from_string(*k);
    if (!v) throw ValidationError("unknown kernel '" + *k + "'", "model.kernel");
    c.kernel = *v;
  }
  if (const auto k = r.str("model", "regime")) {
    if (*k == "short")
      c.regime.regime = PulseRegime::Short;
    else if (*k == "long")
      c.regime.regime = PulseRegime::Long;
    else if (*k != "auto")
      throw ValidationError("expected auto, short or long", "model.regime");
  }
  c.regime.alpha = r.num("model", "alpha");
  c.regime.beta = r.num("model", "beta");
  if (const auto v = r.num("model", "q_max")) c.guards.q_max = *v;
  if (const auto v = r.num("model", "omega_fraction")) c.guards.omega_fraction = *v;
  if (!(c.guards.q_max > 0.0)) throw ValidationError("must be strictly positive", "model.q_max");
  if (!(c.guards.omega_fraction > 0.0)) throw ValidationError("must be strictly positive", "model.omega_fraction");

  canon["model.kind"] = std::string(to_string(c.kind));
  canon["model.kernel"] = std::string(to_string(c.kernel));
  canon["model.regime"] = c.regime.regime ? std::string(to_string(*c.regime.regime)) : "auto";
  if (c.regime.alpha) canon["model.alpha"] = fmt_num(*c.regime.alpha);
  if (c.regime.beta) canon["model.beta"] = fmt_num(*c.regime.beta);
  canon["model.q_max"] = fmt_num(c.guards.q_max);
  canon["model.omega_fraction"] = fmt_num(c.guards.omega_fraction);
}

void resolve_collection(const Reader& r, RunConfig& c, bool required, std::map<std::string, std::string>& canon) {
  c.collection.ell = r.integer("collection", "ell").value_or(0);
  c.collection.p_rad = r.integer("collection", "p").value_or(0);
  const auto w0 = r.num("collection", "w0");
  c.ws_over_wp = r.num("collection", "ws_over_wp");
  if (w0 && c.ws_over_wp) throw ValidationError("give either w0 or ws_over_wp, not both", "collection.w0");
  if (w0) c.collection.w0 = *w0;
  if (!w0 && !c.ws_over_wp) {
    if (required) throw ValidationError("missing required key (or give ws_over_wp)", "collection.w0");
    c.ws_over_wp = 1.0;
  }
  if (c.collection.p_rad < 0) throw ValidationError("must be nonnegative", "collection.p");
  canon["collection.ell"] = std::to_string(c.collection.ell);
  canon["collection.p"] = std::to_string(c.collection.p_rad);
  if (w0) canon["collection.w0"] = fmt_num(*w0);
  if (c.ws_over_wp) canon["collection.ws_over_wp"] = fmt_num(*c.ws_over_wp);
}

void resolve_sweep(const Reader& r, RunConfig& c, std::map<std::string, std::string>& canon) {
  const auto axis = r.str("sweep", "axis");
  if (!axis) throw ValidationError("missing required key", "sweep.axis");
  const auto a = sweep_axis_from_string(*axis);
  if (!a) throw ValidationError("unknown sweep axis '" + *axis + "'", "sweep.axis");
  c.sweep_axis = *a;
  const auto values = r.str("sweep", "values");
  if (!values) throw ValidationError("missing required key", "sweep.values");
  std::string joined;
  for (const std::string& item : split_list(*values)) {
    const double v = Reader::parse_double(item, "sweep.values");
    c.sweep_values.push_back(sweep_to_internal(c.sweep_axis, v));
    joined += (joined.empty() ? "" : ",") + fmt_num(v);
  }
  if (c.sweep_values.empty()) throw ValidationError("needs at least one value", "sweep.values");
  canon["sweep.axis"] = *axis;
  canon["sweep.values"] = joined;
}

GridAxis read_axis(const Reader& r, const std::string& which, std::map<std::string, std::string>& canon) {
  const auto name = r.str("grid", which);
  if (!name) throw ValidationError("missing required key", "grid." + which);
  const auto v = grid_variable_from_string(*name);
  if (!v) throw ValidationError("unknown grid variable '" + *name + "'", "grid." + which);
  GridAxis a;
  a.variable = *v;
  const double lo = r.require("grid", which + "_min");
  const double hi = r.require("grid", which + "_max");
  a.min = axis_to_internal(*v, lo);
  a.max = axis_to_internal(*v, hi);
  const auto n = r.integer("grid", which + "_points");
  if (!n) throw ValidationError("missing required key", "grid." + which + "_points");
  a.points = *n;
  canon["grid." + which] = *name;
  canon["grid." + which + "_min"] = fmt_num(lo);
  canon["grid." + which + "_max"] = fmt_num(hi);
  canon["grid." + which + "_points"] = std::to_string(*n);
  return a;
}

void resolve_grid(const Reader& r, RunConfig& c, std::map<std::string, std::string>& canon) {
  if (!r.has_section("grid")) throw ValidationError("missing required section", "[grid]");
  c.grid.first = read_axis(r, "first", canon);
  c.grid.second = read_axis(r, "second", canon);
  if (const auto v = r.num("grid", "lambda_s")) {
    c.grid.lambda_s = units::nm_to_um(*v);
    canon["grid.lambda_s"] = fmt_num(*v);
  }
  if (const auto v = r.num("grid", "lambda_i")) {
    c.grid.lambda_i = units::nm_to_um(*v);
    canon["grid.lambda_i"] = fmt_num(*v);
  }
  for (auto [key, slot] : {std::pair{"q_sx", &c.grid.q_sx}, std::pair{"q_sy", &c.grid.q_sy},
                           std::pair{"q_ix", &c.grid.q_ix}, std::pair{"q_iy", &c.grid.q_iy},
                           std::pair{"x_s", &c.grid.x_s}, std::pair{"x_i", &c.grid.x_i}}) {
    *slot = r.num("grid", key).value_or(0.0);
    canon[std::string("grid.") + key] = fmt_num(*slot);
  }
  const std::string q = r.str("grid", "quantity").value_or("intensity");
  if (q == "intensity")
    c.grid.quantity = GridQuantity::Intensity;
  else if (q == "amplitude")
    c.grid.quantity = GridQuantity::Amplitude;
  else
    throw ValidationError("expected intensity or amplitude", "grid.quantity");
  canon["grid.quantity"] = q;

  const std::string kinds = r.str("grid", "pmf").value_or("general_sinc,double_sinc,gaussian_substitute");
  for (const std::string& k : split_list(kinds)) {
    const auto v = pmf_kind_from_string(k);
    if (!v) throw ValidationError("unknown pmf kind '" + k + "'", "grid.pmf");
    c.pmf_kinds.push_back(*v);
  }
  if (c.pmf_kinds.empty()) throw ValidationError("needs at least one kind", "grid.pmf");
  canon["grid.pmf"] = kinds;
  c.grid.validate();
}

void resolve_quadrature(const Reader& r, RunConfig& c, std::map<std::string, std::string>& canon) {
  PurityQuadrature& q = c.quad;
  if (const auto e = r.str("quadrature", "engine")) {
    const auto v = purity_engine_from_string(*e);
    if (!v) throw ValidationError("unknown engine '" + *e + "'", "quadrature.engine");
    q.engine = *v;
  }
  for (auto [key, slot] : {std::pair{"radial_order", &q.radial_order}, std::pair{"azimuthal_order", &q.azimuthal_order},
                           std::pair{"spectral_order", &q.spectral_order}, std::pair{"box_order", &q.box_order},
                           std::pair{"max_refinements", &q.max_refinements}}) {
    if (const auto v = r.integer("quadrature", key)) *slot = *v;
    canon[std::string("quadrature.") + key] = std::to_string(*slot);
  }
  for (auto [key, slot] : {std::pair{"tolerance", &q.tolerance}, std::pair{"truncation", &q.truncation},
                           std::pair{"sinc_margin", &q.sinc_margin}, std::pair{"radial_cutoff", &q.radial_cutoff}}) {
    if (const auto v = r.num("quadrature", key)) *slot = *v;
    canon[std::string("quadrature.") + key] = fmt_num(*slot);
  }
  canon["quadrature.engine"] = std::string(to_string(q.engine));
  q.validate();
}

}  // namespace

RunConfig load_config(std::istream& in, Command command) {
  std::istringstream text(rewrite_top_level(in));
  pt::ptree tree;
  try {
    pt::read_ini(text, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ValidationError("line " + std::to_string(e.line()) + ": " + e.message(), "config");
  }
  const Reader r(std::move(tree));

  RunConfig c;
  c.command = command;
  std::map<std::string, std::string> canon;

  c.pump.lambda_p = units::nm_to_um(r.require("pump", "lambda_p"));
  c.pump.w_p = r.require("pump", "w_p");
  c.pump.tau = r.require("pump", "tau");
  canon["pump.lambda_p_nm"] = fmt_num(units::um_to_nm(c.pump.lambda_p));
  canon["pump.w_p"] = fmt_num(c.pump.w_p);
  canon["pump.tau"] = fmt_num(c.pump.tau);

  resolve_crystal(r, c, canon);
  resolve_model(r, c, canon);

  const bool purity_command = command == Command::PuritySweep || command == Command::CompareModels;
  if (purity_command) {
    resolve_sweep(r, c, canon);
    resolve_collection(r, c, c.sweep_axis != SweepAxis::WsOverWp, canon);
    resolve_quadrature(r, c, canon);
  } else if (command == Command::PmfSlice || command == Command::Jsa) {
    resolve_grid(r, c, canon);
  }

  // Fails early with field paths for bad physics inputs.
  (void)derive_params(c.pump, c.crystal, c.regime);

  for (const auto& [k, v] : canon) c.canonical += k + " = " + v + "\n";
  c.hash = fnv1a(c.canonical);
  return c;
}

RunConfig load_config_file(const std::filesystem::path& path, Command command) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open '" + path.string() + "'", "--config");
  return load_config(in, command);
}

}  // namespace spdc::cli
