#include "instances.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "analysis.hpp"

namespace wsrpt {

namespace {

using nlohmann::json;

struct Draft {
  Rational release;
  Rational processing;
  Rational weight;
  int rank = 1;  // 0 for long jobs, so they take the lowest id among equals
};

// Ids in release order; equal releases by descending weight/processing, long
// jobs first.
std::vector<Job> assign_ids(std::vector<Draft> drafts) {
  std::stable_sort(drafts.begin(), drafts.end(), [](const Draft& a, const Draft& b) {
    if (a.release != b.release) return a.release < b.release;
    int c = cmp(a.weight * b.processing, b.weight * a.processing);
    if (c != 0) return c > 0;
    return a.rank < b.rank;
  });
  std::vector<Job> jobs;
  jobs.reserve(drafts.size());
  for (std::size_t i = 0; i < drafts.size(); ++i)
    jobs.push_back({static_cast<JobId>(i), drafts[i].release, drafts[i].processing, drafts[i].weight});
  return jobs;
}

long snap(const Rational& x, const Rational& delta) {
  Rational q = x / delta;
  mpz_class n = (q.get_num() * 2 + q.get_den()) / (q.get_den() * 2);
  if (!n.fits_slong_p()) throw Error(ErrorCode::kInvalidArgument, "delta too small");
  return n.get_si();
}

struct BasicLayout {
  std::vector<Draft> drafts;  // long job first
  Rational y, v, z;
  double wall_density = 0;
  std::vector<std::string> warnings;
};

BasicLayout layout_basic(const ScenarioParams& p) {
  if (p.delta <= 0) throw Error(ErrorCode::kInvalidArgument, "delta must be positive");
  if (!(p.y > 0 && p.y < 1)) throw Error(ErrorCode::kInvalidArgument, "need 0 < y < 1");
  if (p.v && !(*p.v > 0 && *p.v <= p.y))
    throw Error(ErrorCode::kInvalidArgument, "need 0 < v <= y");
  if (p.z && *p.z < 0) throw Error(ErrorCode::kInvalidArgument, "need z >= 0");

  BasicLayout out;
  const Rational& d = p.delta;
  long ny = snap(p.y, d);
  long nv = p.v ? snap(*p.v, d) : ny;
  long nz = p.z ? snap(*p.z, d) : 0;
  if (ny < 1 || Rational(ny) * d >= 1)
    throw Error(ErrorCode::kInvalidArgument, "y does not survive snapping to the delta grid");
  nv = std::clamp(nv, 1L, ny);
  out.y = ny * d;
  out.v = nv * d;
  out.z = nz * d;
  if (out.y != p.y) out.warnings.push_back("y snapped to " + to_string(out.y));
  if (p.v && out.v != *p.v) out.warnings.push_back("v snapped to " + to_string(out.v));
  if (p.z && out.z != *p.z) out.warnings.push_back("z snapped to " + to_string(out.z));

  out.drafts.push_back({0, 1, 1, 0});
  for (long i = 0; i < nv; ++i) {
    Rational r = i * d;
    out.drafts.push_back({r, d, d / (1 - r), 1});
  }
  if (nv < ny) {
    out.wall_density = wall_density(to_double(out.y), to_double(out.z));
    for (long k = nv; k < ny; ++k) {
      long count = std::lround(out.wall_density * static_cast<double>(k - nv + 1)) -
                   std::lround(out.wall_density * static_cast<double>(k - nv));
      Rational r = k * d;
      for (long c = 0; c < count; ++c) out.drafts.push_back({r, d, d / (1 - r), 1});
    }
  }
  for (long c = 0; c < nz; ++c) out.drafts.push_back({out.y, d, d / (1 - out.y), 1});
  return out;
}

Rational small_length(const BasicLayout& layout) {
  Rational total = 0;
  for (std::size_t i = 1; i < layout.drafts.size(); ++i) total += layout.drafts[i].processing;
  return total;
}

}  // namespace

Instance gen_basic(const ScenarioParams& params) {
  BasicLayout layout = layout_basic(params);
  std::vector<Job> jobs = assign_ids(layout.drafts);
  TieScript script;
  for (const Job& j : jobs)
    if (j.release < 1 && (script.empty() || script.back().t != j.release))
      script.push_back({j.release, 0});

  GeneratorTags tags;
  tags.generator = "basic";
  tags.values["y"] = to_string(layout.y);
  tags.values["v"] = to_string(layout.v);
  tags.values["z"] = to_string(layout.z);
  tags.values["delta"] = to_string(params.delta);
  tags.values["wall_density"] = std::to_string(layout.wall_density);
  tags.values["small_length"] = to_string(small_length(layout));
  tags.warnings = layout.warnings;

  Instance out(std::move(jobs), std::move(script));
  out.set_tags(std::move(tags));
  return out;
}

Instance gen_nested(const NestedParams& params) {
  const Rational& r_s = params.r_s;
  if (!(r_s > 0 && r_s < 1)) throw Error(ErrorCode::kInvalidArgument, "need 0 < r_s < 1");
  BasicLayout outer = layout_basic(params.outer);
  BasicLayout inner = layout_basic(params.inner);

  Rational p_s;
  if (params.p_s) {
    p_s = *params.p_s;
  } else {
    ScenarioMetrics m =
        profile_metrics(to_double(inner.y), to_double(inner.v), to_double(inner.z));
    p_s = rational_from_double(optimize_nested_ps(to_double(r_s), m).p_s, 10000);
  }
  if (p_s <= 0) throw Error(ErrorCode::kInvalidArgument, "need p_s > 0");

  Rational inner_length = 1 + small_length(inner);
  double outer_reach = to_double(outer.v) + outer.wall_density * to_double(outer.y - outer.v);
  if (to_double(r_s + p_s * inner_length) < outer_reach)
    throw Error(ErrorCode::kInvalidArgument,
                "nested precondition r_s + p_s * L_S >= v + Delta_v fails (" +
                    std::to_string(to_double(r_s + p_s * inner_length)) + " < " +
                    std::to_string(outer_reach) + ")");

  Rational w_s = p_s / (1 - r_s);
  std::vector<Draft> drafts;
  for (const Draft& d : outer.drafts)
    if (d.rank == 0 || d.release < r_s) drafts.push_back(d);
  for (const Draft& d : inner.drafts)
    drafts.push_back({r_s + p_s * d.release, p_s * d.processing, w_s * d.weight, d.rank});
  std::vector<Job> jobs = assign_ids(drafts);

  JobId outer_long = 0;
  JobId inner_long = -1;
  for (const Job& j : jobs)
    if (j.release == r_s && j.processing == p_s && j.weight == w_s) {
      inner_long = j.id;
      break;
    }
  TieScript script;
  for (const Job& j : jobs) {
    if (!script.empty() && script.back().t == j.release) continue;
    script.push_back({j.release, j.release < r_s ? outer_long : inner_long});
  }

  GeneratorTags tags;
  tags.generator = "nested";
  tags.values["r_s"] = to_string(r_s);
  tags.values["p_s"] = to_string(p_s);
  tags.values["w_s"] = to_string(w_s);
  tags.values["outer_y"] = to_string(outer.y);
  tags.values["outer_v"] = to_string(outer.v);
  tags.values["outer_z"] = to_string(outer.z);
  tags.values["inner_y"] = to_string(inner.y);
  tags.values["inner_v"] = to_string(inner.v);
  tags.values["inner_z"] = to_string(inner.z);
  tags.values["delta"] = to_string(params.inner.delta);
  tags.values["inner_long"] = std::to_string(inner_long);
  tags.warnings = outer.warnings;
  for (const std::string& w : inner.warnings) tags.warnings.push_back("inner: " + w);
  if (!params.p_s) tags.warnings.push_back("p_s chosen by maximizing the combined ratio");

  Instance out(std::move(jobs), std::move(script));
  out.set_tags(std::move(tags));
  return out;
}

Instance gen_random(int n, std::uint64_t seed, const RandomRanges& ranges) {
  if (n < 1) throw Error(ErrorCode::kInvalidArgument, "need n >= 1");
  if (ranges.denominator < 1 || ranges.max_processing < 1 || ranges.max_weight < 1 ||
      ranges.max_release < 0)
    throw Error(ErrorCode::kInvalidArgument, "invalid random ranges");
  std::mt19937_64 rng(seed);
  const long den = ranges.denominator;
  auto draw = [&](long lo, long hi) {
    return std::uniform_int_distribution<long>(lo, hi)(rng);
  };
  std::vector<Draft> drafts;
  for (int i = 0; i < n; ++i) {
    Draft d;
    d.release = ranges.zero_release ? Rational(0) : Rational(draw(0, ranges.max_release * den), den);
    d.processing = Rational(draw(1, ranges.max_processing * den), den);
    d.weight = ranges.unit_weight ? Rational(1) : Rational(draw(1, ranges.max_weight * den), den);
    d.release.canonicalize();
    d.processing.canonicalize();
    d.weight.canonicalize();
    drafts.push_back(d);
  }
  return Instance(assign_ids(std::move(drafts)));
}

Rational tag_rational(const Instance& instance, const std::string& key) {
  if (!instance.tags()) throw Error(ErrorCode::kNotGenerated, "instance has no generator tags");
  auto it = instance.tags()->values.find(key);
  if (it == instance.tags()->values.end())
    throw Error(ErrorCode::kNotGenerated, "generator tag '" + key + "' missing");
  return parse_rational(it->second);
}

// ---------------------------------------------------------------------------

namespace {

Rational json_rational(const json& node, const char* field) {
  if (!node.contains(field)) throw Error(ErrorCode::kParse, std::string("missing field '") + field + "'");
  const json& v = node.at(field);
  if (v.is_string()) return parse_rational(v.get<std::string>());
  if (v.is_number_integer()) return Rational(std::to_string(v.get<long long>()));
  if (v.is_number()) return parse_rational(v.dump());
  throw Error(ErrorCode::kParse, std::string("field '") + field + "' is not a number");
}

json rational_json(const Rational& q) { return to_string(q); }

}  // namespace

std::string instance_to_json(const Instance& instance) {
  json doc;
  doc["jobs"] = json::array();
  for (const Job& j : instance.jobs())
    doc["jobs"].push_back({{"id", j.id},
                           {"r", rational_json(j.release)},
                           {"p", rational_json(j.processing)},
                           {"w", rational_json(j.weight)}});
  if (instance.tie_script()) {
    doc["tie_script"] = json::array();
    for (const TieChoice& c : *instance.tie_script())
      doc["tie_script"].push_back({{"t", rational_json(c.t)}, {"choice", c.choice}});
  }
  if (instance.tags()) {
    const GeneratorTags& t = *instance.tags();
    doc["tags"] = {{"generator", t.generator}, {"values", t.values}, {"warnings", t.warnings}};
  }
  return doc.dump(1);
}

Instance instance_from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParse, std::string("malformed JSON: ") + e.what());
  }
  try {
    if (!doc.is_object() || !doc.contains("jobs") || !doc["jobs"].is_array())
      throw Error(ErrorCode::kParse, "instance needs a 'jobs' array");
    std::vector<Job> jobs;
    for (const json& j : doc["jobs"]) {
      if (!j.contains("id")) throw Error(ErrorCode::kParse, "missing field 'id'");
      jobs.push_back({j.at("id").get<JobId>(), json_rational(j, "r"), json_rational(j, "p"),
                      json_rational(j, "w")});
    }
    std::optional<TieScript> script;
    if (doc.contains("tie_script") && !doc["tie_script"].is_null()) {
      script.emplace();
      for (const json& c : doc["tie_script"]) {
        if (!c.contains("choice")) throw Error(ErrorCode::kParse, "missing field 'choice'");
        script->push_back({json_rational(c, "t"), c.at("choice").get<JobId>()});
      }
    }
    Instance out(std::move(jobs), std::move(script));
    if (doc.contains("tags")) {
      GeneratorTags tags;
      const json& t = doc["tags"];
      tags.generator = t.value("generator", "");
      if (t.contains("values")) tags.values = t["values"].get<std::map<std::string, std::string>>();
      if (t.contains("warnings")) tags.warnings = t["warnings"].get<std::vector<std::string>>();
      out.set_tags(std::move(tags));
    }
    return out;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParse, std::string("bad instance JSON: ") + e.what());
  }
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot write '" + path + "'");
  out << text;
  if (!out) throw Error(ErrorCode::kIo, "write to '" + path + "' failed");
}

Instance read_instance(const std::string& path) { return instance_from_json(read_text_file(path)); }

void write_instance(const Instance& instance, const std::string& path) {
  write_text_file(path, instance_to_json(instance));
}

std::string schedule_to_json(const Schedule& schedule) {
  json doc;
  doc["slices"] = json::array();
  for (const Slice& s : schedule.slices())
    doc["slices"].push_back({{"job", s.job}, {"start", to_string(s.start)}, {"end", to_string(s.end)}});
  return doc.dump(1);
}

Schedule schedule_from_json(const std::string& text) {
  try {
    json doc = json::parse(text);
    std::vector<Slice> slices;
    for (const json& s : doc.at("slices"))
      slices.push_back({s.at("job").get<JobId>(), json_rational(s, "start"), json_rational(s, "end")});
    return Schedule(std::move(slices));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParse, std::string("bad schedule JSON: ") + e.what());
  }
}

std::string schedule_to_csv(const Schedule& schedule) {
  std::string out = "job,start,end\n";
  for (const Slice& s : schedule.slices())
    out += std::to_string(s.job) + "," + to_string(s.start) + "," + to_string(s.end) + "\n";
  return out;
}

}  // namespace wsrpt
