#include "qgrem/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "qgrem/errors.hpp"

namespace qgrem::io {

using nlohmann::json;

namespace {

std::vector<double> numbers(const json& doc, const char* key) {
  if (!doc.contains(key) || !doc.at(key).is_array())
    throw ValidationError(std::string("model: missing numeric array '") + key + "'");
  std::vector<double> out;
  for (const auto& v : doc.at(key)) {
    if (!v.is_number()) throw ValidationError(std::string("model: non-numeric entry in '") + key + "'");
    out.push_back(v.get<double>());
  }
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot read '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

double to_double(const std::string& s) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw ValidationError("not a number: '" + s + "'");
  }
  if (used != s.size()) throw ValidationError("not a number: '" + s + "'");
  return v;
}

}  // namespace

NonHierModel parse_nonhier(const json& doc) {
  const int n = doc.at("n").get<int>();
  auto lengths = numbers(doc, "L");
  if (static_cast<int>(lengths.size()) != n) throw ValidationError("model: 'L' must have n entries");
  auto model = NonHierModel::make(std::move(lengths));
  if (!doc.contains("weights") || !doc.at("weights").is_object())
    throw ValidationError("model: 'weights' must be an object keyed by subsets");
  for (const auto& [key, value] : doc.at("weights").items()) {
    if (!value.is_number()) throw ValidationError("model: weight for '" + key + "' is not a number");
    model.weight(parse_subset_key(key, n)) = value.get<double>();
  }
  model.validate();
  return model;
}

json to_json(const NonHierModel& model) {
  json weights = json::object();
  for (Subset s = 1; s <= model.full(); ++s)
    if (model.weight(s) != 0.0) weights[subset_key(s)] = model.weight(s);
  return {{"n", model.n}, {"L", model.lengths}, {"weights", weights}};
}

DisorderSource parse_model(const json& doc) {
  if (!doc.is_object()) throw ValidationError("model: expected a JSON object");
  if (doc.contains("weights")) return parse_nonhier(doc);
  const std::string kind = doc.value("kind", "step");
  DistributionSpec spec;
  spec.normalized = doc.value("normalized", true);
  spec.x = numbers(doc, "x");
  if (kind == "step") {
    spec = DistributionSpec::step(numbers(doc, "a"), spec.x, spec.normalized);
  } else if (kind == "piecewise_linear") {
    spec.kind = DistributionKind::PiecewiseLinear;
    spec.value = numbers(doc, "A");
    spec.validate();
  } else {
    throw ValidationError("model: unknown kind '" + kind + "'");
  }
  return spec;
}

DisorderSource load_model(const std::string& path) {
  json doc;
  try {
    doc = json::parse(read_file(path));
  } catch (const json::exception& e) {
    throw ValidationError("model '" + path + "': " + e.what());
  }
  try {
    return parse_model(doc);
  } catch (const json::exception& e) {
    throw ValidationError("model '" + path + "': " + e.what());
  }
}

FieldSpec parse_field(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw ValidationError("field must look like law:args");
  const std::string law = text.substr(0, colon);
  const std::string arg = text.substr(colon + 1);
  FieldSpec field;
  if (law == "constant") {
    field = ConstantField{to_double(arg)};
  } else if (law == "gaussian") {
    const auto comma = arg.find(',');
    if (comma == std::string::npos) throw ValidationError("gaussian field needs mean,stddev");
    field = GaussianField{to_double(arg.substr(0, comma)), to_double(arg.substr(comma + 1))};
  } else if (law == "discrete") {
    std::istringstream in(read_file(arg));
    DiscreteField d;
    double v = 0.0, p = 0.0;
    while (in >> v >> p) {
      d.values.push_back(v);
      d.probabilities.push_back(p);
    }
    if (!in.eof()) throw ValidationError("discrete field file: expected 'value probability' pairs");
    field = d;
  } else if (law == "empirical") {
    std::istringstream in(read_file(arg));
    EmpiricalField e;
    double v = 0.0;
    while (in >> v) e.sample.push_back(v);
    if (!in.eof()) throw ValidationError("empirical field file: expected numbers");
    field = e;
  } else {
    throw ValidationError("unknown field law '" + law + "'");
  }
  validate(field);
  return field;
}

std::vector<double> parse_grid(const std::string& text) {
  std::vector<std::string> parts;
  std::istringstream in(text);
  std::string tok;
  while (std::getline(in, tok, ':')) parts.push_back(tok);
  if (parts.size() == 1) return {to_double(parts[0])};
  if (parts.size() != 3) throw DomainError("grid must be start:stop:count");
  const double a = to_double(parts[0]);
  const double b = to_double(parts[1]);
  const double c = to_double(parts[2]);
  if (!(c >= 1.0) || c != std::floor(c)) throw DomainError("grid count must be an integer >= 1");
  if (!(a <= b)) throw DomainError("grid start must not exceed stop");
  const auto count = static_cast<std::size_t>(c);
  std::vector<double> out(count);
  for (std::size_t i = 0; i < count; ++i)
    out[i] = count == 1 ? a : a + (b - a) * static_cast<double>(i) / static_cast<double>(count - 1);
  return out;
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  std::istringstream in(text);
  std::string tok;
  while (std::getline(in, tok, ',')) {
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(tok, &used);
    } catch (const std::exception&) {
      throw DomainError("bad integer '" + tok + "'");
    }
    if (used != tok.size()) throw DomainError("bad integer '" + tok + "'");
    out.push_back(v);
  }
  if (out.empty()) throw DomainError("empty integer list");
  return out;
}

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string config_hash(const std::string& canonical) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : canonical) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

}  // namespace qgrem::io
