#include "isrsgn/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "isrsgn/errors.hpp"
#include "isrsgn/units.hpp"

namespace isrsgn {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

struct RawConfig {
  // section -> key -> (value, line)
  std::map<std::string, std::map<std::string, std::pair<std::string, int>>> data;
  std::string origin;

  [[noreturn]] void fail(int line, const std::string& msg) const {
    throw config_error(origin + ":" + std::to_string(line) + ": " + msg);
  }

  const std::pair<std::string, int>* find(const std::string& sec, const std::string& key) const {
    auto s = data.find(sec);
    if (s == data.end()) return nullptr;
    auto k = s->second.find(key);
    if (k == s->second.end()) return nullptr;
    return &k->second;
  }

  double number(const std::string& sec, const std::string& key, double def) const {
    const auto* v = find(sec, key);
    if (!v) return def;
    try {
      std::size_t used = 0;
      const double x = std::stod(v->first, &used);
      if (used != v->first.size()) throw std::invalid_argument("trailing");
      return x;
    } catch (...) {
      fail(v->second, "expected a number for '" + key + "', got '" + v->first + "'");
    }
  }

  long long integer(const std::string& sec, const std::string& key, long long def) const {
    const double x = number(sec, key, static_cast<double>(def));
    const long long n = std::llround(x);
    if (std::abs(x - static_cast<double>(n)) > 1e-9) {
      const auto* v = find(sec, key);
      fail(v ? v->second : 0, "expected an integer for '" + key + "'");
    }
    return n;
  }

  std::string text(const std::string& sec, const std::string& key, const std::string& def) const {
    const auto* v = find(sec, key);
    return v ? v->first : def;
  }

  bool flag(const std::string& sec, const std::string& key, bool def) const {
    const auto* v = find(sec, key);
    if (!v) return def;
    if (v->first == "on" || v->first == "true" || v->first == "1") return true;
    if (v->first == "off" || v->first == "false" || v->first == "0") return false;
    fail(v->second, "expected on/off for '" + key + "'");
  }

  // "a:b, c:d" pair list
  std::vector<std::pair<double, double>> pairs(const std::string& sec,
                                               const std::string& key) const {
    const auto* v = find(sec, key);
    std::vector<std::pair<double, double>> out;
    if (!v) return out;
    std::stringstream ss(v->first);
    std::string item;
    while (std::getline(ss, item, ',')) {
      item = trim(item);
      if (item.empty()) continue;
      const auto colon = item.find(':');
      if (colon == std::string::npos) fail(v->second, "expected 'x:y' pairs for '" + key + "'");
      try {
        out.emplace_back(std::stod(item.substr(0, colon)), std::stod(item.substr(colon + 1)));
      } catch (...) {
        fail(v->second, "bad pair '" + item + "' for '" + key + "'");
      }
    }
    return out;
  }

  std::vector<double> list(const std::string& sec, const std::string& key) const {
    const auto* v = find(sec, key);
    std::vector<double> out;
    if (!v) return out;
    std::stringstream ss(v->first);
    std::string item;
    while (std::getline(ss, item, ',')) {
      item = trim(item);
      if (item.empty()) continue;
      try {
        out.push_back(std::stod(item));
      } catch (...) {
        fail(v->second, "bad number '" + item + "' in '" + key + "'");
      }
    }
    return out;
  }
};

const std::map<std::string, std::vector<std::string>>& known_keys() {
  static const std::map<std::string, std::vector<std::string>> keys = {
      {"fiber",
       {"alpha_db_per_km", "dispersion_ps_nm_km", "dispersion_slope", "gamma_per_w_km",
        "raman_slope_per_w_km_thz", "length_km", "reference_wavelength_nm", "raman_curve",
        "alpha_curve"}},
      {"spectrum",
       {"channel_count", "symbol_rate_gbd", "spacing_ghz", "launch_power_dbm_total",
        "launch_power_dbm_per_channel", "center_frequency_thz"}},
      {"link", {"spans", "noise_figure_db"}},
      {"model", {"variant", "quad_rel_tol", "zeta_rel_tol", "photon_factor", "eta_mode"}},
      {"simulation",
       {"symbols_log2", "step_m", "seed", "samples_per_symbol", "rolloff_percent",
        "isrs_emulation", "ase", "transmitter"}},
  };
  return keys;
}

RawConfig parse_raw(const std::string& body, const std::string& origin) {
  RawConfig raw;
  raw.origin = origin;
  std::stringstream ss(body);
  std::string line;
  std::string section;
  int line_no = 0;
  while (std::getline(ss, line)) {
    ++line_no;
    const auto hash = line.find_first_of("#;");
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') raw.fail(line_no, "unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      if (!known_keys().count(section)) raw.fail(line_no, "unknown section '" + section + "'");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) raw.fail(line_no, "expected 'key = value'");
    if (section.empty()) raw.fail(line_no, "key outside of any section");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) raw.fail(line_no, "empty key");
    const auto& allowed = known_keys().at(section);
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
      raw.fail(line_no, "unknown key '" + key + "' in section [" + section + "]");
    raw.data[section][key] = {value, line_no};
  }
  return raw;
}

}  // namespace

SystemConfig parse_config_text(const std::string& text, const std::string& origin) {
  RawConfig raw = parse_raw(text, origin);
  SystemConfig c;
  c.alpha_db_per_km = raw.number("fiber", "alpha_db_per_km", c.alpha_db_per_km);
  c.dispersion_ps_nm_km = raw.number("fiber", "dispersion_ps_nm_km", c.dispersion_ps_nm_km);
  c.dispersion_slope = raw.number("fiber", "dispersion_slope", c.dispersion_slope);
  c.gamma_per_w_km = raw.number("fiber", "gamma_per_w_km", c.gamma_per_w_km);
  c.raman_slope_per_w_km_thz =
      raw.number("fiber", "raman_slope_per_w_km_thz", c.raman_slope_per_w_km_thz);
  c.length_km = raw.number("fiber", "length_km", c.length_km);
  c.reference_wavelength_nm =
      raw.number("fiber", "reference_wavelength_nm", c.reference_wavelength_nm);
  c.raman_curve = raw.pairs("fiber", "raman_curve");
  c.alpha_curve = raw.pairs("fiber", "alpha_curve");

  c.channel_count = static_cast<int>(raw.integer("spectrum", "channel_count", c.channel_count));
  c.symbol_rate_gbd = raw.number("spectrum", "symbol_rate_gbd", c.symbol_rate_gbd);
  c.spacing_ghz = raw.number("spectrum", "spacing_ghz", c.spacing_ghz);
  if (raw.find("spectrum", "launch_power_dbm_total"))
    c.launch_power_dbm_total = raw.number("spectrum", "launch_power_dbm_total", 0.0);
  c.launch_power_dbm_per_channel = raw.list("spectrum", "launch_power_dbm_per_channel");
  c.center_frequency_thz = raw.number("spectrum", "center_frequency_thz", c.center_frequency_thz);

  c.spans = static_cast<int>(raw.integer("link", "spans", c.spans));
  c.noise_figure_db = raw.number("link", "noise_figure_db", c.noise_figure_db);

  c.variant = raw.text("model", "variant", c.variant);
  c.quad_rel_tol = raw.number("model", "quad_rel_tol", c.quad_rel_tol);
  c.zeta_rel_tol = raw.number("model", "zeta_rel_tol", c.zeta_rel_tol);
  c.photon_factor = raw.text("model", "photon_factor", c.photon_factor);
  c.eta_mode = raw.text("model", "eta_mode", c.eta_mode);

  c.symbols_log2 = static_cast<int>(raw.integer("simulation", "symbols_log2", c.symbols_log2));
  c.step_m = raw.number("simulation", "step_m", c.step_m);
  c.seed = static_cast<std::uint64_t>(raw.integer("simulation", "seed", 1));
  c.samples_per_symbol =
      static_cast<int>(raw.integer("simulation", "samples_per_symbol", c.samples_per_symbol));
  c.rolloff_percent = raw.number("simulation", "rolloff_percent", c.rolloff_percent);
  c.isrs_emulation = raw.text("simulation", "isrs_emulation", c.isrs_emulation);
  c.ase = raw.flag("simulation", "ase", c.ase);
  c.transmitter = raw.text("simulation", "transmitter", c.transmitter);

  // Validation that needs cross-field context happens in the converters; the
  // cheap scalar checks happen here so errors carry the origin.
  if (c.channel_count < 1) throw config_error(origin + ": spectrum.channel_count must be >= 1");
  if (!c.launch_power_dbm_total && c.launch_power_dbm_per_channel.empty())
    throw config_error(origin + ": spectrum needs launch_power_dbm_total or "
                                "launch_power_dbm_per_channel");
  if (!c.launch_power_dbm_per_channel.empty() &&
      static_cast<int>(c.launch_power_dbm_per_channel.size()) != c.channel_count)
    throw config_error(origin + ": launch_power_dbm_per_channel length must equal channel_count");
  if (!model_variant_from_string(c.variant))
    throw config_error(origin + ": unknown model.variant '" + c.variant + "'");
  return c;
}

SystemConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("cannot open config file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str(), path);
}

FiberSpec SystemConfig::fiber() const {
  FiberSpec f;
  f.alpha_per_m = units::atten_db_per_km_to_per_m(alpha_db_per_km);
  auto [b2, b3] = convert_dispersion_eng(dispersion_ps_nm_km, dispersion_slope,
                                         reference_wavelength_nm);
  f.beta2_s2_per_m = b2;
  f.beta3_s3_per_m = b3;
  f.gamma_per_w_m = units::gamma_to_si(gamma_per_w_km);
  f.raman_slope_per_w_m_hz = units::raman_slope_to_si(raman_slope_per_w_km_thz);
  f.length_m = length_km * units::km;
  if (!raman_curve.empty()) {
    SampledCurve c;
    for (const auto& [thz, g] : raman_curve) {
      c.x.push_back(thz * units::thz);
      c.y.push_back(units::raman_gain_to_si(g));
    }
    f.raman_gain_curve = c;
  }
  if (!alpha_curve.empty()) {
    SampledCurve c;
    for (const auto& [thz, a] : alpha_curve) {
      c.x.push_back(thz * units::thz);
      c.y.push_back(units::atten_db_per_km_to_per_m(a));
    }
    f.alpha_curve = c;
  }
  f.validate();
  return f;
}

WdmSpectrum SystemConfig::spectrum() const {
  const double spacing = spacing_ghz * units::ghz;
  if (spacing <= 0) throw config_error("spectrum.spacing_ghz must be positive");
  WdmSpectrum s;
  s.ref_frequency_hz = center_frequency_thz * units::thz;
  for (int i = 0; i < channel_count; ++i) {
    Channel ch;
    ch.center_hz = (i - 0.5 * (channel_count - 1)) * spacing;
    ch.bandwidth_hz = spacing;  // gapless piecewise-constant PSD
    ch.symbol_rate_baud = symbol_rate_gbd > 0 ? symbol_rate_gbd * units::ghz : spacing;
    if (!launch_power_dbm_per_channel.empty())
      ch.power_w = units::dbm_to_watt(launch_power_dbm_per_channel[static_cast<std::size_t>(i)]);
    else
      ch.power_w = units::dbm_to_watt(*launch_power_dbm_total) / channel_count;
    s.channels.push_back(ch);
  }
  s.validate();
  return s;
}

LinkSpec SystemConfig::link() const {
  LinkSpec l;
  l.span = fiber();
  l.span_count = spans;
  l.noise_figure_db = noise_figure_db;
  l.validate();
  return l;
}

ModelVariant SystemConfig::model_variant() const {
  auto v = model_variant_from_string(variant);
  if (!v) throw config_error("unknown model.variant '" + variant + "'");
  return *v;
}

QuadratureOptions SystemConfig::quadrature() const {
  QuadratureOptions q;
  q.rel_tol = quad_rel_tol;
  if (eta_mode == "locally-flat")
    q.eta_mode = EtaMode::LocallyFlat;
  else if (eta_mode == "exact-edges")
    q.eta_mode = EtaMode::ExactEdges;
  else if (eta_mode == "exact-all")
    q.eta_mode = EtaMode::ExactAll;
  else
    throw config_error("unknown model.eta_mode '" + eta_mode + "'");
  return q;
}

PhotonFactor SystemConfig::photon() const {
  if (photon_factor == "as-printed") return PhotonFactor::AsPrinted;
  if (photon_factor == "inverted") return PhotonFactor::Inverted;
  if (photon_factor == "none") return PhotonFactor::None;
  throw config_error("unknown model.photon_factor '" + photon_factor + "'");
}

SimConfig SystemConfig::simulation() const {
  SimConfig sim;
  sim.spectrum = spectrum();
  sim.fiber = fiber();
  sim.span_count = spans;
  sim.noise_figure_db = noise_figure_db;
  sim.symbols_log2 = symbols_log2;
  sim.samples_per_symbol = samples_per_symbol;
  sim.step_m = step_m;
  sim.rolloff = rolloff_percent / 100.0;
  sim.seed = seed;
  sim.ase = ase;
  if (isrs_emulation == "analytical-profile")
    sim.isrs = SimConfig::IsrsEmulation::AnalyticalProfile;
  else if (isrs_emulation == "ode-profile")
    sim.isrs = SimConfig::IsrsEmulation::OdeProfile;
  else if (isrs_emulation == "off")
    sim.isrs = SimConfig::IsrsEmulation::Off;
  else
    throw config_error("unknown simulation.isrs_emulation '" + isrs_emulation + "'");
  if (transmitter == "rrc-gaussian")
    sim.transmitter = SimConfig::Transmitter::RrcGaussian;
  else if (transmitter == "rrc-constant-modulus")
    sim.transmitter = SimConfig::Transmitter::RrcConstantModulus;
  else if (transmitter == "comb")
    sim.transmitter = SimConfig::Transmitter::Comb;
  else
    throw config_error("unknown simulation.transmitter '" + transmitter + "'");
  return sim;
}

std::string SystemConfig::serialize() const {
  std::ostringstream out;
  out.precision(17);
  out << "[fiber]\n";
  out << "alpha_db_per_km = " << alpha_db_per_km << "\n";
  out << "dispersion_ps_nm_km = " << dispersion_ps_nm_km << "\n";
  out << "dispersion_slope = " << dispersion_slope << "\n";
  out << "gamma_per_w_km = " << gamma_per_w_km << "\n";
  out << "raman_slope_per_w_km_thz = " << raman_slope_per_w_km_thz << "\n";
  out << "length_km = " << length_km << "\n";
  out << "reference_wavelength_nm = " << reference_wavelength_nm << "\n";
  auto pairs_out = [&out](const char* key, const std::vector<std::pair<double, double>>& v) {
    if (v.empty()) return;
    out << key << " = ";
    for (std::size_t i = 0; i < v.size(); ++i)
      out << v[i].first << ":" << v[i].second << (i + 1 < v.size() ? ", " : "");
    out << "\n";
  };
  pairs_out("raman_curve", raman_curve);
  pairs_out("alpha_curve", alpha_curve);
  out << "\n[spectrum]\n";
  out << "channel_count = " << channel_count << "\n";
  out << "symbol_rate_gbd = " << symbol_rate_gbd << "\n";
  out << "spacing_ghz = " << spacing_ghz << "\n";
  if (launch_power_dbm_total) out << "launch_power_dbm_total = " << *launch_power_dbm_total << "\n";
  if (!launch_power_dbm_per_channel.empty()) {
    out << "launch_power_dbm_per_channel = ";
    for (std::size_t i = 0; i < launch_power_dbm_per_channel.size(); ++i)
      out << launch_power_dbm_per_channel[i]
          << (i + 1 < launch_power_dbm_per_channel.size() ? ", " : "");
    out << "\n";
  }
  out << "center_frequency_thz = " << center_frequency_thz << "\n";
  out << "\n[link]\n";
  out << "spans = " << spans << "\n";
  out << "noise_figure_db = " << noise_figure_db << "\n";
  out << "\n[model]\n";
  out << "variant = " << variant << "\n";
  out << "quad_rel_tol = " << quad_rel_tol << "\n";
  out << "zeta_rel_tol = " << zeta_rel_tol << "\n";
  out << "photon_factor = " << photon_factor << "\n";
  out << "eta_mode = " << eta_mode << "\n";
  out << "\n[simulation]\n";
  out << "symbols_log2 = " << symbols_log2 << "\n";
  out << "step_m = " << step_m << "\n";
  out << "seed = " << seed << "\n";
  out << "samples_per_symbol = " << samples_per_symbol << "\n";
  out << "rolloff_percent = " << rolloff_percent << "\n";
  out << "isrs_emulation = " << isrs_emulation << "\n";
  out << "ase = " << (ase ? "on" : "off") << "\n";
  out << "transmitter = " << transmitter << "\n";
  return out.str();
}

}  // namespace isrsgn
