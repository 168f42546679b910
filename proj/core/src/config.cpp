#include "raqswipt/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

#include "raqswipt/errors.hpp"

namespace raq {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

double parse_double(const std::string& text, const std::string& where) {
  double value = 0.0;
  const char* begin = text.data();
  const char* end = begin + text.size();
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end) throw ConfigError(where + ": not a number: '" + text + "'");
  return value;
}

std::string format_double(double v) {
  std::ostringstream os;
  os << std::setprecision(std::numeric_limits<double>::max_digits10) << v;
  return os.str();
}

std::string join(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ", ";
    out += format_double(v[i]);
  }
  return out;
}

void read_frontend(const KeyValueDocument& doc, const std::string& name, FrontEnd& fe) {
  SectionReader r(doc, name);
  r.read("rho", fe.rho);
  r.read("phi2", fe.phi2);
  r.read("sigma2", fe.sigma2);
  r.finish();
}

}  // namespace

KeyValueDocument KeyValueDocument::parse(std::istream& in, const std::string& origin) {
  KeyValueDocument doc;
  std::string line;
  std::string current;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find_first_of("#;");
    const std::string text = trim(hash == std::string::npos ? line : line.substr(0, hash));
    if (text.empty()) continue;
    const std::string where = origin + ":" + std::to_string(lineno);
    if (text.front() == '[') {
      if (text.back() != ']') throw ConfigError(where + ": unterminated section header");
      current = trim(text.substr(1, text.size() - 2));
      if (current.empty()) throw ConfigError(where + ": empty section name");
      doc.sections_[current];
      continue;
    }
    const auto eq = text.find('=');
    if (eq == std::string::npos) throw ConfigError(where + ": expected 'key = value'");
    if (current.empty()) throw ConfigError(where + ": key outside of any section");
    const std::string key = trim(text.substr(0, eq));
    const std::string value = trim(text.substr(eq + 1));
    if (key.empty()) throw ConfigError(where + ": empty key");
    auto& sec = doc.sections_[current];
    if (sec.count(key)) throw ConfigError(where + ": duplicate key '" + key + "'");
    sec[key] = value;
  }
  return doc;
}

KeyValueDocument KeyValueDocument::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path.string());
  return parse(in, path.string());
}

bool KeyValueDocument::has_section(const std::string& section) const {
  return sections_.count(section) != 0;
}

const std::map<std::string, std::string>* KeyValueDocument::section(const std::string& name) const {
  auto it = sections_.find(name);
  return it == sections_.end() ? nullptr : &it->second;
}

std::vector<std::string> KeyValueDocument::section_names() const {
  std::vector<std::string> names;
  for (const auto& [name, _] : sections_) names.push_back(name);
  return names;
}

SectionReader::SectionReader(const KeyValueDocument& doc, std::string section)
    : section_(std::move(section)), values_(doc.section(section_)) {}

const std::string* SectionReader::lookup(const std::string& key) {
  if (!values_) return nullptr;
  auto it = values_->find(key);
  if (it == values_->end()) return nullptr;
  consumed_.push_back(key);
  return &it->second;
}

void SectionReader::read(const std::string& key, int& out) {
  if (const auto* v = lookup(key)) {
    const double d = parse_double(*v, section_ + "." + key);
    if (d != std::floor(d) || std::abs(d) > std::numeric_limits<int>::max()) {
      throw ConfigError(section_ + "." + key + ": expected an integer");
    }
    out = static_cast<int>(d);
  }
}

void SectionReader::read(const std::string& key, double& out) {
  if (const auto* v = lookup(key)) out = parse_double(*v, section_ + "." + key);
}

void SectionReader::read(const std::string& key, std::string& out) {
  if (const auto* v = lookup(key)) out = *v;
}

void SectionReader::read(const std::string& key, std::uint64_t& out) {
  if (const auto* v = lookup(key)) {
    std::uint64_t value = 0;
    auto [ptr, ec] = std::from_chars(v->data(), v->data() + v->size(), value);
    if (ec != std::errc() || ptr != v->data() + v->size()) {
      throw ConfigError(section_ + "." + key + ": expected an unsigned integer");
    }
    out = value;
  }
}

void SectionReader::read(const std::string& key, std::vector<double>& out) {
  if (const auto* v = lookup(key)) {
    out.clear();
    std::stringstream ss(*v);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_double(trim(item), section_ + "." + key));
    if (out.empty()) throw ConfigError(section_ + "." + key + ": empty list");
  }
}

void SectionReader::finish() const {
  if (!values_) return;
  for (const auto& [key, _] : *values_) {
    if (std::find(consumed_.begin(), consumed_.end(), key) == consumed_.end()) {
      throw ConfigError("unknown key '" + key + "' in section [" + section_ + "]");
    }
  }
}

void ConfigFile::validate() const {
  system.validate();
  raqr.validate();
  rf.validate();
  if (geometry.region_radius < 0.0 || !(geometry.bs_distance > geometry.region_radius)) {
    throw ConfigError("geometry: need 0 <= region_radius < bs_distance");
  }
}

ConfigFile read_config(const KeyValueDocument& doc) {
  ConfigFile c;
  {
    SectionReader r(doc, "system");
    auto& s = c.system;
    r.read("M", s.M);
    r.read("K", s.K);
    r.read("tau", s.tau);
    r.read("T", s.T);
    r.read("ps_max", s.ps_max);
    r.read("eta_eh", s.eta_eh);
    r.read("rreq_u", s.rreq_u);
    r.read("rreq_d", s.rreq_d);
    r.read("bandwidth", s.bandwidth);
    r.read("fc_ghz", s.fc_ghz);
    r.read("sigma2_rf", s.sigma2_rf);
    r.read("sigma2_ks", s.sigma2_ks);
    r.read("battery_dbm", s.battery_dbm);
    r.finish();
    s.broadcast_per_device();
  }
  read_frontend(doc, "frontend.raqr", c.raqr);
  c.raqr.kind = ReceiverKind::kRaqr;
  {
    SectionReader r(doc, "frontend.raqr.array");
    r.read("lo_angle_rad", c.array.lo_angle_rad);
    r.read("spacing_wavelengths", c.array.spacing_wavelengths);
    r.read("phi_phase_rad", c.array.phi_phase_rad);
    r.finish();
  }
  read_frontend(doc, "frontend.rf", c.rf);
  c.rf.kind = ReceiverKind::kRf;
  {
    SectionReader r(doc, "geometry");
    r.read("region_radius", c.geometry.region_radius);
    r.read("bs_distance", c.geometry.bs_distance);
    r.finish();
  }
  c.validate();
  return c;
}

ConfigFile load_config(const std::filesystem::path& path) {
  return read_config(KeyValueDocument::load(path));
}

std::string write_config(const ConfigFile& c) {
  std::ostringstream os;
  const auto& s = c.system;
  os << "[system]\n"
     << "M = " << s.M << "\n"
     << "K = " << s.K << "\n"
     << "tau = " << s.tau << "\n"
     << "T = " << s.T << "\n"
     << "ps_max = " << format_double(s.ps_max) << "\n"
     << "eta_eh = " << format_double(s.eta_eh) << "\n"
     << "rreq_u = " << join(s.rreq_u) << "\n"
     << "rreq_d = " << join(s.rreq_d) << "\n"
     << "bandwidth = " << format_double(s.bandwidth) << "\n"
     << "fc_ghz = " << format_double(s.fc_ghz) << "\n"
     << "sigma2_rf = " << join(s.sigma2_rf) << "\n"
     << "sigma2_ks = " << join(s.sigma2_ks) << "\n"
     << "battery_dbm = " << format_double(s.battery_dbm) << "\n\n";
  auto fe = [&os](const char* name, const FrontEnd& f) {
    os << "[" << name << "]\n"
       << "rho = " << format_double(f.rho) << "\n"
       << "phi2 = " << format_double(f.phi2) << "\n"
       << "sigma2 = " << format_double(f.sigma2) << "\n\n";
  };
  fe("frontend.raqr", c.raqr);
  os << "[frontend.raqr.array]\n"
     << "lo_angle_rad = " << format_double(c.array.lo_angle_rad) << "\n"
     << "spacing_wavelengths = " << format_double(c.array.spacing_wavelengths) << "\n"
     << "phi_phase_rad = " << format_double(c.array.phi_phase_rad) << "\n\n";
  fe("frontend.rf", c.rf);
  os << "[geometry]\n"
     << "region_radius = " << format_double(c.geometry.region_radius) << "\n"
     << "bs_distance = " << format_double(c.geometry.bs_distance) << "\n";
  return os.str();
}

Scenario make_scenario(const ConfigFile& config, const Geometry& geometry, ReceiverKind receiver) {
  Scenario sc;
  sc.system = config.system;
  sc.receiver = receiver == ReceiverKind::kRaqr ? config.raqr : config.rf;
  sc.rf = config.rf;
  sc.array = config.array;
  sc.beta = large_scale_fading(geometry, config.system.fc_ghz);
  sc.validate();
  return sc;
}

}  // namespace raq
