#include "hnflow/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>

#include "hnflow/hn.hpp"
#include "hnflow/pairs.hpp"
#include "hnflow/weight.hpp"

namespace hnflow {

using nlohmann::json;

double round6(double x) {
  const double r = std::nearbyint(x * 1e6) / 1e6;
  return r == 0.0 ? 0.0 : r;
}

namespace {

json rat_json(const Rat& x) { return json(x.str()); }

json point_json(int a, long long b) { return json::array({a, b}); }

Rat field_rat(const json& doc, const char* field) {
  try {
    return Rat::parse(doc.at(field).get<std::string>());
  } catch (const std::exception&) {
    throw SpecError(std::string("field \"") + field +
                    "\" must be a rational string \"p/q\"");
  }
}

std::vector<int> field_int_list(const json& doc, const char* field) {
  const auto it = doc.find(field);
  if (it == doc.end() || !it->is_array())
    throw SpecError(std::string("field \"") + field + "\" must be an array");
  std::vector<int> out;
  for (const auto& v : *it) {
    if (!v.is_number_integer())
      throw SpecError(std::string("field \"") + field +
                      "\" must hold integers");
    out.push_back(v.get<int>());
  }
  return out;
}

}  // namespace

BundleSpec parse_bundle_spec(const json& doc) {
  if (!doc.is_object()) throw SpecError("input must be a JSON object");
  BundleSpec spec;
  spec.twists = field_int_list(doc, "twists");
  if (spec.twists.empty()) throw SpecError("twists must be non-empty");
  if (doc.contains("pair")) {
    const json& pj = doc.at("pair");
    if (!pj.is_object()) throw SpecError("field \"pair\" must be an object");
    PairSpec ps;
    ps.image = field_int_list(pj, "image");
    for (int i : ps.image)
      if (i < 1 || i > static_cast<int>(spec.twists.size()))
        throw SpecError("pair image index out of range (1-based)");
    ps.tau = field_rat(pj, "tau");
    spec.pair = std::move(ps);
  }
  return spec;
}

BundleSpec parse_bundle_spec_text(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw SpecError(e.what());
  }
  return parse_bundle_spec(doc);
}

SplitBundle spec_bundle(const BundleSpec& spec) {
  return SplitBundle(spec.twists);
}

namespace {

SplitBundle spec_bundle_with_map(const BundleSpec& spec,
                                 std::vector<int>* input_to_sorted) {
  const int n = static_cast<int>(spec.twists.size());
  std::vector<int> order(static_cast<size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return spec.twists[static_cast<size_t>(a)] >
           spec.twists[static_cast<size_t>(b)];
  });
  input_to_sorted->assign(static_cast<size_t>(n), 0);
  for (int pos = 0; pos < n; ++pos)
    (*input_to_sorted)[static_cast<size_t>(order[static_cast<size_t>(pos)])] =
        pos;
  return SplitBundle(spec.twists);
}

}  // namespace

PairModel spec_pair(const BundleSpec& spec) {
  if (!spec.pair) throw SpecError("input carries no pair");
  std::vector<int> input_to_sorted;
  SplitBundle b = spec_bundle_with_map(spec, &input_to_sorted);
  std::vector<int> image;
  for (int pos : spec.pair->image)
    image.push_back(input_to_sorted[static_cast<size_t>(pos - 1)]);
  return PairModel(std::move(b), std::move(image), spec.pair->tau);
}

json hn_document(const BundleSpec& spec) {
  if (spec.pair) throw SpecError("hn expects an input without a pair");
  const SplitBundle b = spec_bundle(spec);
  const Flag f = hn_filtration(b);
  json doc;
  doc["schema"] = 1;
  doc["command"] = "hn";
  doc["twists"] = spec.twists;
  doc["semistable"] = is_semistable(b);
  json steps = json::array();
  for (const SlopePoint& s : f.steps) steps.push_back(point_json(s.rank, s.degree));
  doc["steps"] = steps;
  json ranks = json::array();
  json slopes = json::array();
  for (const Quotient& q : quotient_data(f)) {
    ranks.push_back(q.rank);
    slopes.push_back(rat_json(q.slope));
  }
  doc["quotient_ranks"] = ranks;
  doc["quotient_slopes"] = slopes;
  json poly = json::array();
  for (const auto& [x, y] : polygon_of(f).vertices)
    poly.push_back(point_json(x, y));
  doc["polygon"] = poly;
  return doc;
}

namespace {

json min_weight_json(const Rat& norm_sq) {
  json w;
  if (const auto root = norm_sq.sqrt_exact())
    w["exact"] = (-*root).str();
  else
    w["exact"] = "-sqrt(" + norm_sq.str() + ")";
  w["float"] = round6(-std::sqrt(norm_sq.to_double()));
  return w;
}

json witnesses_json(const Flag& f) {
  json out = json::array();
  for (const auto& set : *f.witnesses) {
    json one = json::array();
    for (int i : set) one.push_back(i + 1);
    out.push_back(one);
  }
  return out;
}

json steps_json(const Flag& f) {
  json out = json::array();
  for (const SlopePoint& s : f.steps) out.push_back(point_json(s.rank, s.degree));
  return out;
}

json blocks_json(const std::vector<SplitBundle>& blocks) {
  json out = json::array();
  for (const SplitBundle& b : blocks) out.push_back(b.twists());
  return out;
}

json direction_matrix_json(const std::vector<Rat>& dir) {
  json out = json::array();
  for (size_t i = 0; i < dir.size(); ++i) {
    json row = json::array();
    for (size_t j = 0; j < dir.size(); ++j)
      row.push_back(rat_json(dir[i] - dir[j]));
    out.push_back(row);
  }
  return out;
}

}  // namespace

json destabilize_document(const BundleSpec& spec) {
  json doc;
  doc["schema"] = 1;
  doc["command"] = "destabilize";
  doc["twists"] = spec.twists;
  if (!spec.pair) {
    const SplitBundle b = spec_bundle(spec);
    doc["semistable"] = is_semistable(b);
    const auto dest = optimal_destabilizer(b);
    if (!dest) {
      doc["destabilizer"] = nullptr;
      return doc;
    }
    json d;
    d["flag"] = steps_json(dest->flag);
    d["witnesses"] = witnesses_json(dest->flag);
    json dir = json::array();
    for (const Rat& x : dest->direction) dir.push_back(rat_json(x));
    d["direction"] = dir;
    d["norm_sq"] = rat_json(dest->norm_sq);
    d["min_weight"] = min_weight_json(dest->norm_sq);
    json fv = json::array();
    for (double x : dest->float_view) fv.push_back(round6(x));
    d["float_view"] = fv;
    d["limit_blocks"] = blocks_json(limit_object(b, *dest));
    d["decay_exponents"] = direction_matrix_json(dest->direction);
    doc["destabilizer"] = d;
    return doc;
  }
  const PairModel p = spec_pair(spec);
  doc["image"] = spec.pair->image;
  doc["tau"] = rat_json(p.tau);
  doc["tau_semistable"] = is_tau_semistable(p);
  const auto dest = pair_optimal_destabilizer(p);
  if (!dest) {
    doc["destabilizer"] = nullptr;
    return doc;
  }
  const GeneralizedHN g = generalized_hn(p);
  json d;
  d["case"] = to_string(g.case_tag);
  d["m_index"] = g.m_index;
  d["flag"] = steps_json(dest->flag);
  d["witnesses"] = witnesses_json(dest->flag);
  json dir = json::array();
  for (const Rat& x : dest->direction) dir.push_back(rat_json(x));
  d["direction"] = dir;
  d["norm_sq"] = rat_json(dest->norm_sq);
  d["min_weight"] = min_weight_json(dest->norm_sq);
  if (dest->skip) d["skip_index"] = dest->m_index + 1;
  const auto lim = pair_limit_object(p, *dest);
  d["limit_blocks"] = blocks_json(lim.blocks);
  if (lim.phi_block) d["phi_block"] = *lim.phi_block + 1;
  d["decay_exponents"] = direction_matrix_json(dest->direction);
  doc["destabilizer"] = d;
  return doc;
}

namespace {

// The polygon and baseline a spec draws: the (generalized) filtration
// polygon with baseline slope m, or tau for pairs. A tau-semistable pair
// has no filtration and draws the trivial polygon.
struct Drawing {
  Flag flag;
  Rat baseline;
};

Drawing drawing_of(const BundleSpec& spec) {
  if (!spec.pair) {
    const SplitBundle b = spec_bundle(spec);
    return {hn_filtration(b), b.slope()};
  }
  const PairModel p = spec_pair(spec);
  if (is_tau_semistable(p)) {
    Flag trivial;
    trivial.steps.push_back({p.bundle.rank(), p.bundle.degree()});
    std::vector<int> all(static_cast<size_t>(p.bundle.rank()));
    std::iota(all.begin(), all.end(), 0);
    trivial.witnesses = std::vector<std::vector<int>>{all};
    return {trivial, p.tau};
  }
  return {generalized_hn(p).flag, p.tau};
}

}  // namespace

json polygon_document(const BundleSpec& spec) {
  const Drawing d = drawing_of(spec);
  json doc;
  doc["schema"] = 1;
  doc["command"] = "polygon";
  doc["twists"] = spec.twists;
  doc["baseline"] = rat_json(d.baseline);
  json verts = json::array();
  for (const auto& [x, y] : polygon_of(d.flag).vertices)
    verts.push_back(point_json(x, y));
  doc["vertices"] = verts;
  return doc;
}

namespace {

std::string fmt2(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.2f", x);
  // avoid the "-0.00" artifact
  if (std::string(buf) == "-0.00") return "0.00";
  return buf;
}

}  // namespace

std::string polygon_svg(const BundleSpec& spec) {
  const SplitBundle b = spec_bundle(spec);
  const Drawing d = drawing_of(spec);
  const Polygon poly = polygon_of(d.flag);
  const int r = b.rank();

  std::vector<std::pair<int, long long>> swept;
  for (int k = 1; k < r; ++k)
    for (long long deg = b.bottomsum(k); deg <= b.topsum(k); ++deg)
      swept.emplace_back(k, deg);

  const double base_end = d.baseline.to_double() * r;
  double ymin = 0.0, ymax = 0.0;
  const auto see = [&](double y) {
    ymin = std::min(ymin, y);
    ymax = std::max(ymax, y);
  };
  for (const auto& [x, y] : poly.vertices) see(static_cast<double>(y));
  for (const auto& [x, y] : swept) see(static_cast<double>(y));
  see(base_end);
  if (ymax - ymin < 1.0) ymax = ymin + 1.0;

  const double width = 480.0, height = 360.0, pad = 40.0;
  const double sx = (width - 2 * pad) / r;
  const double sy = (height - 2 * pad) / (ymax - ymin);
  const auto px = [&](double x) { return pad + x * sx; };
  const auto py = [&](double y) { return height - pad - (y - ymin) * sy; };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"480\" "
         "height=\"360\" viewBox=\"0 0 480 360\">\n";
  svg << "<rect x=\"0\" y=\"0\" width=\"480\" height=\"360\" fill=\"white\"/>\n";
  // axes
  svg << "<line x1=\"" << fmt2(px(0)) << "\" y1=\"" << fmt2(py(ymin))
      << "\" x2=\"" << fmt2(px(0)) << "\" y2=\"" << fmt2(py(ymax))
      << "\" stroke=\"#cccccc\" stroke-width=\"1\"/>\n";
  if (ymin <= 0.0 && 0.0 <= ymax)
    svg << "<line x1=\"" << fmt2(px(0)) << "\" y1=\"" << fmt2(py(0))
        << "\" x2=\"" << fmt2(px(r)) << "\" y2=\"" << fmt2(py(0))
        << "\" stroke=\"#cccccc\" stroke-width=\"1\"/>\n";
  // swept subobject points, all below the polygon
  for (const auto& [x, y] : swept)
    svg << "<circle cx=\"" << fmt2(px(x)) << "\" cy=\""
        << fmt2(py(static_cast<double>(y)))
        << "\" r=\"1.50\" fill=\"#999999\"/>\n";
  // baseline from the origin
  svg << "<line x1=\"" << fmt2(px(0)) << "\" y1=\"" << fmt2(py(0))
      << "\" x2=\"" << fmt2(px(r)) << "\" y2=\"" << fmt2(py(base_end))
      << "\" stroke=\"#d62728\" stroke-width=\"1\" stroke-dasharray=\"4 3\"/>\n";
  // the filtration polygon
  svg << "<polyline points=\"";
  for (size_t i = 0; i < poly.vertices.size(); ++i) {
    if (i) svg << " ";
    svg << fmt2(px(poly.vertices[i].first)) << ","
        << fmt2(py(static_cast<double>(poly.vertices[i].second)));
  }
  svg << "\" fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"2\"/>\n";
  for (const auto& [x, y] : poly.vertices)
    svg << "<circle cx=\"" << fmt2(px(x)) << "\" cy=\""
        << fmt2(py(static_cast<double>(y)))
        << "\" r=\"3.00\" fill=\"#1f77b4\"/>\n";
  // label
  svg << "<text x=\"44.00\" y=\"20.00\" font-family=\"monospace\" "
         "font-size=\"12\">twists [";
  for (size_t i = 0; i < spec.twists.size(); ++i)
    svg << (i ? "," : "") << spec.twists[i];
  svg << "]  " << (spec.pair ? "tau" : "m") << " = " << d.baseline.str()
      << "</text>\n";
  svg << "</svg>\n";
  return svg.str();
}

SweepConfig default_sweep_config() {
  SweepConfig cfg;
  cfg.max_rank = 4;
  cfg.twist_min = -2;
  cfg.twist_max = 3;
  cfg.tau_grid = {Rat(-1, 2), Rat(0), Rat(1, 2), Rat(1), Rat(3, 2), Rat(2)};
  cfg.degree_slack = 2;
  cfg.grid_resolution = 1e-3;
  cfg.grid_samples = 200;
  cfg.rng_seed = 1729;
  cfg.negative_control = false;
  return cfg;
}

SweepConfig parse_sweep_config(const json& doc) {
  if (!doc.is_object()) throw SpecError("config must be a JSON object");
  SweepConfig cfg = default_sweep_config();
  if (doc.contains("schema") && doc.at("schema") != 1)
    throw SpecError("unsupported config schema");
  if (doc.contains("max_rank")) {
    if (!doc.at("max_rank").is_number_integer())
      throw SpecError("field \"max_rank\" must be an integer");
    cfg.max_rank = doc.at("max_rank").get<int>();
  }
  if (doc.contains("twists")) {
    const auto range = field_int_list(doc, "twists");
    if (range.size() != 2) throw SpecError("field \"twists\" must be [min, max]");
    cfg.twist_min = range[0];
    cfg.twist_max = range[1];
  }
  if (doc.contains("tau_grid")) {
    if (!doc.at("tau_grid").is_array())
      throw SpecError("field \"tau_grid\" must be an array of rational strings");
    cfg.tau_grid.clear();
    for (const auto& v : doc.at("tau_grid")) {
      try {
        cfg.tau_grid.push_back(Rat::parse(v.get<std::string>()));
      } catch (const std::exception&) {
        throw SpecError("field \"tau_grid\" must hold rational strings");
      }
    }
  }
  if (doc.contains("degree_slack")) {
    if (!doc.at("degree_slack").is_number_integer())
      throw SpecError("field \"degree_slack\" must be an integer");
    cfg.degree_slack = doc.at("degree_slack").get<int>();
  }
  if (doc.contains("grid_resolution")) {
    if (!doc.at("grid_resolution").is_number())
      throw SpecError("field \"grid_resolution\" must be a number");
    cfg.grid_resolution = doc.at("grid_resolution").get<double>();
  }
  if (doc.contains("grid_samples")) {
    if (!doc.at("grid_samples").is_number_integer())
      throw SpecError("field \"grid_samples\" must be an integer");
    cfg.grid_samples = doc.at("grid_samples").get<int>();
  }
  if (doc.contains("rng_seed")) {
    if (!doc.at("rng_seed").is_number_integer())
      throw SpecError("field \"rng_seed\" must be an integer");
    cfg.rng_seed = doc.at("rng_seed").get<unsigned>();
  }
  if (doc.contains("negative_control")) {
    if (!doc.at("negative_control").is_boolean())
      throw SpecError("field \"negative_control\" must be a boolean");
    cfg.negative_control = doc.at("negative_control").get<bool>();
  }
  try {
    validate_config(cfg);
  } catch (const std::invalid_argument& e) {
    throw SpecError(e.what());
  }
  return cfg;
}

namespace {

json report_json(const CertReport& rep) {
  json out;
  out["bundles"] = rep.bundles;
  out["instances"] = rep.instances;
  out["flags"] = rep.flags;
  out["spectra"] = rep.spectra;
  out["grid_checks"] = rep.grid_checks;
  out["skipped"] = rep.skipped;
  json v = json::array();
  for (const Violation& violation : rep.violations) {
    json one;
    one["kind"] = violation.kind;
    one["detail"] = violation.detail;
    v.push_back(one);
  }
  out["violations"] = v;
  return out;
}

}  // namespace

json verify_document(const SweepConfig& cfg, const CertReport& classical,
                     const CertReport& pairs) {
  json doc;
  doc["schema"] = 1;
  doc["command"] = "verify";
  json c;
  c["max_rank"] = cfg.max_rank;
  c["twists"] = json::array({cfg.twist_min, cfg.twist_max});
  json taus = json::array();
  for (const Rat& t : cfg.tau_grid) taus.push_back(rat_json(t));
  c["tau_grid"] = taus;
  c["degree_slack"] = cfg.degree_slack;
  c["grid_resolution"] = cfg.grid_resolution;
  c["grid_samples"] = cfg.grid_samples;
  c["rng_seed"] = cfg.rng_seed;
  c["negative_control"] = cfg.negative_control;
  doc["config"] = c;
  doc["classical"] = report_json(classical);
  doc["pairs"] = report_json(pairs);
  doc["total_violations"] = static_cast<long long>(
      classical.violations.size() + pairs.violations.size());
  return doc;
}

std::string dump_document(const json& doc) { return doc.dump(2) + "\n"; }

namespace {

bool rat_field_ok(const json& v) {
  if (!v.is_string()) return false;
  try {
    Rat::parse(v.get<std::string>());
  } catch (const std::exception&) {
    return false;
  }
  return true;
}

bool rat_array_ok(const json& v) {
  if (!v.is_array()) return false;
  for (const auto& x : v)
    if (!rat_field_ok(x)) return false;
  return true;
}

}  // namespace

bool schema_roundtrip_ok(const json& doc, std::string* why) try {
  const auto fail = [&](const std::string& msg) {
    if (why) *why = msg;
    return false;
  };
  if (!doc.is_object()) return fail("not an object");
  if (!doc.contains("schema") || doc.at("schema") != 1)
    return fail("missing or unsupported schema");
  if (!doc.contains("command") || !doc.at("command").is_string())
    return fail("missing command");
  const std::string cmd = doc.at("command").get<std::string>();
  if (cmd == "hn") {
    for (const char* k : {"twists", "steps", "polygon", "quotient_ranks"})
      if (!doc.contains(k) || !doc.at(k).is_array()) return fail(k);
    if (!doc.contains("semistable") || !doc.at("semistable").is_boolean())
      return fail("semistable");
    if (!rat_array_ok(doc.at("quotient_slopes"))) return fail("quotient_slopes");
  } else if (cmd == "destabilize") {
    if (!doc.contains("destabilizer")) return fail("destabilizer");
    const json& d = doc.at("destabilizer");
    if (!d.is_null()) {
      if (!rat_array_ok(d.at("direction"))) return fail("direction");
      if (!rat_field_ok(d.at("norm_sq"))) return fail("norm_sq");
      if (!d.at("min_weight").contains("exact")) return fail("min_weight");
      if (!d.at("min_weight").at("float").is_number())
        return fail("min_weight.float");
    }
    if (doc.contains("tau") && !rat_field_ok(doc.at("tau"))) return fail("tau");
  } else if (cmd == "polygon") {
    if (!doc.contains("vertices") || !doc.at("vertices").is_array())
      return fail("vertices");
    if (!rat_field_ok(doc.at("baseline"))) return fail("baseline");
  } else if (cmd == "verify") {
    for (const char* k : {"classical", "pairs", "config"})
      if (!doc.contains(k) || !doc.at(k).is_object()) return fail(k);
    if (!doc.contains("total_violations")) return fail("total_violations");
  } else {
    return fail("unknown command " + cmd);
  }
  const std::string once = dump_document(doc);
  json reparsed;
  try {
    reparsed = json::parse(once);
  } catch (const json::parse_error& e) {
    return fail(e.what());
  }
  if (dump_document(reparsed) != once) return fail("serialization not stable");
  return true;
} catch (const std::exception& e) {
  if (why) *why = e.what();
  return false;
}

}  // namespace hnflow
