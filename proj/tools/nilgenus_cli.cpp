// nilgenus: command-line front end. See README.md for subcommands, the
// report schema and exit codes.

#include <openssl/evp.h>

#include <chrono>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "nilgenus/nilgenus.hpp"

using namespace nilgenus;
using Json = nlohmann::ordered_json;

namespace {

constexpr const char* kSchema = "nilgenus-report/1";

enum Exit { kOk = 0, kVerdict = 1, kUsage = 2, kCap = 3 };

struct Context {
  bool json = false;
  bool deterministic = false;
  std::string report_path;
  unsigned jobs = 1;
  NqLimits nq;
  std::size_t max_cosets = 1000000;
  std::size_t max_index = 256;
  Json inputs = Json::array();
  std::ostringstream text;
};

std::string sha256_hex(const std::string& bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr);
  std::ostringstream out;
  for (unsigned int i = 0; i < len; ++i) out << std::hex << std::setw(2) << std::setfill('0') << int(md[i]);
  return out.str();
}

Presentation load(Context& ctx, const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidArgument("cannot read '" + path + "'");
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  ctx.inputs.push_back({{"path", path}, {"sha256", sha256_hex(bytes)}});
  try {
    return parse_presentation(bytes);
  } catch (const ParseError& e) {
    throw ParseError(e.line(), e.column(), path + ": " + [&] {
      std::string w = e.what();
      auto at = w.find(": ");
      return at == std::string::npos ? w : w.substr(at + 2);
    }());
  }
}

Json integer(const Integer& z) {
  if (z.fits_slong_p()) return z.get_si();
  return z.get_str();
}

Json invariants(const AbelianInvariants& a) {
  Json t = Json::array();
  for (const auto& d : a.torsion) t.push_back(integer(d));
  return {{"free_rank", a.free_rank}, {"torsion", t}};
}

std::string invariants_text(const AbelianInvariants& a) {
  std::string s;
  auto add = [&](const std::string& part) { s += (s.empty() ? "" : " + ") + part; };
  if (a.free_rank == 1) add("Z");
  if (a.free_rank > 1) add("Z^" + std::to_string(a.free_rank));
  for (const auto& d : a.torsion) add("Z/" + d.get_str());
  return s.empty() ? "1" : s;
}

Json presentation_json(const Presentation& p) {
  Json rels = Json::array();
  for (const auto& r : p.relators()) rels.push_back(format_word(r, p.generator_names()));
  return {{"generators", p.generator_names()}, {"relators", rels}};
}

Json images_json(const GroupHom& h) {
  Json out = Json::object();
  for (std::size_t k = 0; k < h.images.size(); ++k)
    out[h.source.name(k)] = format_word(h.images[k], h.target.generator_names());
  return out;
}

Json factor_list(const std::vector<AbelianInvariants>& fs) {
  Json out = Json::array();
  for (const auto& f : fs) out.push_back(invariants(f));
  return out;
}

std::string group_ring_text(const GroupRingElement& e, const std::vector<std::string>& names) {
  if (e.empty()) return "0";
  std::string s;
  for (const auto& [w, c] : e) {
    std::string mono = w.empty() ? "1" : format_word(w, names);
    if (s.empty())
      s = c < 0 ? "-" : "";
    else
      s += c < 0 ? " - " : " + ";
    long long a = c < 0 ? -c : c;
    s += a == 1 ? mono : std::to_string(a) + "*" + mono;
  }
  return s;
}

/// Target of a spec like "z=1": the explicit file when given, else the
/// source modulo the assignments, Tietze simplified.
GroupHom hom_from_spec(Context& ctx, const Presentation& source, const std::string& spec, const std::string& target_path) {
  if (target_path.empty()) return quotient_by_assignments(source, spec);
  return parse_hom_spec(spec, source, load(ctx, target_path));
}

int cmd_abel(Context& ctx, Json& result, const std::string& file) {
  Presentation p = load(ctx, file);
  AbelianInvariants a = abelianization(p);
  result = {{"generators", p.generator_count()}, {"relators", p.relator_count()}, {"abelianization", invariants(a)}};
  ctx.text << "H_1 = " << invariants_text(a) << "\n";
  return kOk;
}

int cmd_nq(Context& ctx, Json& result, const std::string& file, int c) {
  Presentation p = load(ctx, file);
  if (c < 1) throw InvalidArgument("--class must be at least 1");
  PcQuotient q(p);
  NqBuilder b(q, ctx.nq);
  result = {{"class", c}};
  int reached = 0;
  std::optional<std::string> cap;
  for (int k = 1; k <= c; ++k) {
    if (q.stable_from() && *q.stable_from() <= k - 1) {
      reached = c;
      break;
    }
    try {
      b.extend();
    } catch (const CapExceeded& e) {
      cap = e.what();
      break;
    }
    reached = k;
  }
  PcQuotient done = reached == q.class_bound() ? q : truncate(q, q.class_bound());
  auto factors = lcs_invariants(done);
  bool finite = done.hirsch_length() == 0;
  Integer order = 1;
  if (finite)
    for (std::size_t i = 0; i < done.size(); ++i) order *= static_cast<long>(done.pc().relative_order(i));
  result["class_reached"] = done.class_bound();
  result["pc_generators"] = done.size();
  result["hirsch_length"] = done.hirsch_length();
  result["order"] = finite ? integer(order) : Json("infinite");
  result["factors"] = factor_list(factors);
  result["stable_from"] = done.stable_from() ? Json(*done.stable_from()) : Json(nullptr);
  for (std::size_t k = 0; k < factors.size(); ++k)
    ctx.text << "G_" << k + 1 << "/G_" << k + 2 << " = " << invariants_text(factors[k]) << "\n";
  ctx.text << "hirsch length " << done.hirsch_length() << ", order "
           << (finite ? order.get_str() : std::string("infinite")) << "\n";
  if (done.stable_from()) ctx.text << "lower central series stable from class " << *done.stable_from() << "\n";
  if (cap) throw CapExceeded(*cap);
  return kOk;
}

Json table_json(const CosetTable& t) {
  Json perms = Json::array();
  for (std::size_t g = 0; g < t.generator_count(); ++g) perms.push_back(t.permutation(g));
  return perms;
}

int cmd_low_index(Context& ctx, Json& result, const std::string& file, std::size_t max, bool normal) {
  Presentation p = load(ctx, file);
  LowIndexOptions opt;
  opt.max_index = max;
  opt.normal_only = normal;
  opt.jobs = ctx.jobs;
  auto subs = low_index(p, opt);
  Json list = Json::array();
  std::map<std::size_t, std::size_t> by_index;
  for (const auto& s : subs) {
    ++by_index[s.index];
    list.push_back({{"index", s.index}, {"normal", s.normal}, {"permutations", table_json(s.table)}});
  }
  Json counts = Json::array();
  for (auto [i, n] : by_index) {
    counts.push_back({{"index", i}, {"count", n}});
    ctx.text << "index " << i << ": " << n << (normal ? " normal" : "") << " subgroup(s) up to conjugacy\n";
  }
  result = {{"max_index", max}, {"normal_only", normal}, {"count", subs.size()}, {"by_index", counts}, {"subgroups", list}};
  ctx.text << subs.size() << " total\n";
  return kOk;
}

int cmd_rs(Context& ctx, Json& result, const std::string& file, const std::string& spec) {
  Presentation p = load(ctx, file);
  std::vector<Word> gens;
  Json echo = Json::array();
  for (const auto& tok : detail::split_tokens(spec, 1, ",")) {
    gens.push_back(parse_word(tok.text, p));
    echo.push_back(format_word(gens.back(), p.generator_names()));
  }
  CosetTable t = todd_coxeter(p, gens, ctx.max_cosets);
  Presentation sub = reidemeister_schreier(p, t);
  AbelianInvariants a = abelianization(sub);
  result = {{"subgroup", echo}, {"index", t.index()}, {"presentation", presentation_json(sub)}, {"abelianization", invariants(a)}};
  ctx.text << "index " << t.index() << "\n" << serialize(sub) << "H_1 = " << invariants_text(a) << "\n";
  return kOk;
}

int cmd_l2(Context& ctx, Json& result, const std::string& file, const std::string& kind, std::size_t depth,
           std::uint64_t prime) {
  Presentation p = load(ctx, file);
  TowerOptions opt{ctx.max_index, ctx.jobs};
  Tower t = kind == "m-of-d" ? m_of_d_tower(p, depth, opt) : congruence_tower(p, prime, depth, opt);
  L2Estimate e = luck_estimate(p, t);
  Json steps = Json::array();
  for (std::size_t i = 0; i < e.indices.size(); ++i) {
    steps.push_back({{"index", e.indices[i]}, {"b1", e.betti[i]}, {"ratio", e.ratios[i].get_str()}});
    ctx.text << "[G:N] = " << e.indices[i] << "  b_1(N) = " << e.betti[i] << "  ratio " << e.ratios[i] << "\n";
  }
  result = {{"tower", kind},
            {"prime", kind == "m-of-d" ? Json(nullptr) : Json(prime)},
            {"depth", depth},
            {"steps", steps},
            {"indices_increasing", e.indices_increasing},
            {"ratios_nonincreasing", e.ratios_nonincreasing}};
  return kOk;
}

Json genus_json(const GenusReport& g) {
  Json per = Json::array();
  for (const auto& r : g.per_class) {
    per.push_back({{"class", r.nilpotency_class},
                   {"verdict", verdict_name(r.verdict)},
                   {"surjective", r.surjective},
                   {"factor_match", r.factor_match},
                   {"source_factors", factor_list(r.source_factors)},
                   {"target_factors", factor_list(r.target_factors)}});
  }
  return {{"class", g.c_max}, {"per_class", per}, {"iso_through", g.iso_through}};
}

void genus_text(Context& ctx, const GenusReport& g) {
  for (const auto& r : g.per_class) ctx.text << "class " << r.nilpotency_class << ": " << verdict_name(r.verdict) << "\n";
  ctx.text << "iso through class " << g.iso_through << " of " << g.c_max << "\n";
}

int genus_exit(const GenusReport& g) {
  if (g.cap_error) throw CapExceeded(*g.cap_error);
  return g.iso_through == g.c_max ? kOk : kVerdict;
}

int cmd_fibre(Context& ctx, Json& result, std::size_t rank, const std::string& qfile, int c) {
  Presentation q = load(ctx, qfile);
  FibreProductGenerators fp = fibre_product_gens(rank, q);
  const auto& names = fp.ambient.generator_names();
  Json gens = Json::array();
  for (const auto& w : fp.generators) gens.push_back(format_word(w, names));
  GroupHom cover = fibre_product_cover(q);
  result = {{"rank", rank},
            {"ambient", presentation_json(fp.ambient)},
            {"generators", gens},
            {"cover", presentation_json(cover.source)},
            {"cover_map", images_json(cover)},
            {"finitely_presented", "unknown"}};
  ctx.text << "P < F x F generated by:\n";
  for (const auto& g : gens) ctx.text << "  " << g.get<std::string>() << "\n";
  ctx.text << "cover with " << cover.source.generator_count() << " generators and " << cover.source.relator_count()
           << " relators\n";
  if (c <= 0) return kOk;
  GenusReport g = genus_check(cover, c, ctx.nq, ctx.jobs);
  result["genus"] = genus_json(g);
  genus_text(ctx, g);
  return genus_exit(g);
}

int cmd_genus(Context& ctx, Json& result, const std::string& file, const std::string& spec, const std::string& target,
              int c) {
  Presentation p = load(ctx, file);
  GroupHom h = hom_from_spec(ctx, p, spec, target);
  result = {{"target", presentation_json(h.target)}, {"images", images_json(h)}};
  GenusReport g = genus_check(h, c, ctx.nq, ctx.jobs);
  result["certified"] = g.hom.certified_exactly ? Json("exact") : Json(g.hom.certified_class.value_or(0));
  result.update(genus_json(g));
  genus_text(ctx, g);
  return genus_exit(g);
}

int cmd_fox(Context& ctx, Json& result, const std::string& file, std::uint64_t prime) {
  Presentation p = load(ctx, file);
  HomologyDims d = complex_homology_mod_p(p, prime);
  Json fox = Json::array();
  for (const auto& row : fox_derivatives(p)) {
    Json r = Json::array();
    for (const auto& e : row) r.push_back(group_ring_text(e, p.generator_names()));
    fox.push_back(r);
  }
  result = {{"prime", prime}, {"h0", d.h0}, {"h1", d.h1}, {"h2", d.h2}, {"fox_matrix", fox}};
  ctx.text << "dim H_0 = " << d.h0 << ", dim H_1 = " << d.h1 << ", dim H_2 = " << d.h2 << " over F_" << prime << "\n";
  return kOk;
}

int cmd_witness(Context& ctx, Json& result, const std::string& file, const std::string& spec, const std::string& target,
                const std::string& candidate, int c, std::size_t search) {
  Presentation p = load(ctx, file);
  GroupHom h = hom_from_spec(ctx, p, spec, target);
  Word w = parse_word(candidate, p);
  WitnessReport r = non_residual_nilpotence_witness(h, w, c, search, ctx.nq);
  result = {{"candidate", format_word(w, p.generator_names())},
            {"target", presentation_json(h.target)},
            {"images", images_json(h)},
            {"epimorphism", r.epimorphism},
            {"source_h1", invariants(r.source_h1)},
            {"h1_isomorphism", r.h1_isomorphism},
            {"trivial_in_quotient", r.trivial_in_quotient},
            {"nontrivial_in_finite_quotient",
             r.nontrivial_in_finite_quotient ? Json(*r.nontrivial_in_finite_quotient) : Json(nullptr)},
            {"confirmed", r.confirmed}};
  ctx.text << "epimorphism onto free group: " << (r.epimorphism ? "yes" : "no") << "\n"
           << "H_1 isomorphism: " << (r.h1_isomorphism ? "yes" : "no") << "\n";
  for (std::size_t k = 0; k < r.trivial_in_quotient.size(); ++k)
    ctx.text << "class " << k + 1 << ": candidate " << (r.trivial_in_quotient[k] ? "trivial" : "NONTRIVIAL") << "\n";
  if (r.nontrivial_in_finite_quotient)
    ctx.text << "candidate survives in a finite quotient of index " << *r.nontrivial_in_finite_quotient << "\n";
  ctx.text << (r.confirmed ? "witness confirmed" : "witness NOT confirmed") << "\n";
  return r.confirmed ? kOk : kVerdict;
}

int cmd_build(Context& ctx, Json& result, const std::string& name) {
  Presentation p = build_named(name);
  result = {{"name", name}, {"presentation", presentation_json(p)}, {"text", serialize(p)}};
  ctx.text << serialize(p);
  return kOk;
}

std::vector<std::string> command_echo(int argc, char** argv) {
  std::vector<std::string> out;
  for (int i = 1; i < argc; ++i) {
    std::string a = argv[i];
    if (a == "--jobs" || a == "-j") {
      ++i;
      continue;
    }
    if (a.rfind("--jobs=", 0) == 0 || a == "--deterministic" || a == "--json") continue;
    if (a == "--report") {
      ++i;
      continue;
    }
    if (a.rfind("--report=", 0) == 0) continue;
    out.push_back(a);
  }
  return out;
}

const char* status_name(int code) {
  switch (code) {
    case kOk: return "ok";
    case kVerdict: return "verdict-failed";
    case kUsage: return "usage-error";
    case kCap: return "cap-exceeded";
  }
  return "error";
}

void emit(const Context& ctx, int argc, char** argv, int code, const Json& result, const Json& error,
          std::chrono::steady_clock::time_point start) {
  Json report = {{"schema", kSchema},
                 {"command", command_echo(argc, argv)},
                 {"inputs", ctx.inputs},
                 {"status", status_name(code)},
                 {"exit_code", code},
                 {"result", result},
                 {"error", error},
                 {"cap", {{"hit", code == kCap}}}};
  if (!ctx.deterministic) {
    auto us = std::chrono::duration_cast<std::chrono::microseconds>(std::chrono::steady_clock::now() - start).count();
    report["timing"] = {{"elapsed_us", us}};
  }
  std::string doc = report.dump(2) + "\n";
  if (ctx.json)
    std::cout << doc;
  else
    std::cout << ctx.text.str();
  if (!ctx.report_path.empty()) {
    std::ofstream out(ctx.report_path, std::ios::binary);
    out << doc;
    if (!out) std::cerr << "nilgenus: cannot write report to '" << ctx.report_path << "'\n";
  }
  if (!error.is_null()) std::cerr << "nilgenus: " << error["message"].get<std::string>() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  auto start = std::chrono::steady_clock::now();
  Context ctx;
  CLI::App app{"Certified computations with finitely presented groups"};
  app.fallthrough();
  app.require_subcommand(1);
  app.add_flag("--json", ctx.json, "Print the machine-readable report instead of text");
  app.add_option("--report", ctx.report_path, "Also write the report to this file");
  app.add_flag("--deterministic", ctx.deterministic, "Omit timing from the report");
  app.add_option("-j,--jobs", ctx.jobs, "Worker threads")->check(CLI::Range(1u, 1024u));
  app.add_option("--max-hirsch", ctx.nq.max_hirsch, "Hirsch length cap for nilpotent quotients");
  app.add_option("--max-seconds", ctx.nq.max_seconds_per_class, "Time cap per nilpotent class");
  app.add_option("--max-cosets", ctx.max_cosets, "Coset cap for enumeration");
  app.add_option("--max-tower-index", ctx.max_index, "Index cap for tower steps");

  std::string file, spec, target, qfile, tower = "p-congruence", candidate, name;
  int c = 1, fibre_class = 0, witness_class = 4;
  std::size_t max = 1, depth = 1, rank = 0, search = 0;
  std::uint64_t prime = 2;
  bool normal = false;

  auto* abel = app.add_subcommand("abel", "Abelianization");
  abel->add_option("file", file)->required();
  auto* nq = app.add_subcommand("nq", "Nilpotent quotient G/G_{c+1}");
  nq->add_option("--class", c)->required();
  nq->add_option("file", file)->required();
  auto* li = app.add_subcommand("low-index", "Subgroups of small index up to conjugacy");
  li->add_option("--max", max)->required();
  li->add_flag("--normal", normal);
  li->add_option("file", file)->required();
  auto* rs = app.add_subcommand("rs", "Reidemeister-Schreier presentation of a subgroup");
  rs->add_option("--subgroup", spec, "Comma-separated generating words")->required();
  rs->add_option("file", file)->required();
  auto* l2 = app.add_subcommand("l2", "b_1(N)/[G:N] along a tower");
  l2->add_option("--tower", tower)->check(CLI::IsMember({"p-congruence", "m-of-d"}));
  l2->add_option("--depth", depth)->required();
  l2->add_option("--prime", prime);
  l2->add_option("file", file)->required();
  auto* fibre = app.add_subcommand("fibre", "Fibre product of F_r -> Q");
  fibre->add_option("--rank", rank)->required();
  fibre->add_option("--q", qfile)->required();
  fibre->add_option("--class", fibre_class, "Also compare lower central quotients of the cover with F x F");
  auto* genus = app.add_subcommand("genus-check", "Compare G/G_{k+1} and H/H_{k+1} along a map, k <= c");
  genus->add_option("--class", c)->required();
  genus->add_option("--hom", spec)->required();
  genus->add_option("--target", target, "Target presentation; default is the quotient by the assignments");
  genus->add_option("file", file)->required();
  auto* fox = app.add_subcommand("fox-h2", "Fox matrix and mod-p homology of the presentation complex");
  fox->add_option("--p", prime)->required();
  fox->add_option("file", file)->required();
  auto* wit = app.add_subcommand("witness", "Certify a kernel element lying in every G_k");
  wit->add_option("--retraction", spec)->required();
  wit->add_option("--target", target);
  wit->add_option("--candidate", candidate)->required();
  wit->add_option("--class", witness_class);
  wit->add_option("--search-index", search, "Look for a finite quotient where the candidate survives");
  wit->add_option("file", file)->required();
  auto* build = app.add_subcommand("build", "Print a named presentation");
  build->add_option("name", name, "higman, acyclic:p, linkA2, surface:g or free:r")->required();

  Json result = nullptr, error = nullptr;
  int code = kOk;
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    for (int i = 1; i < argc; ++i) ctx.json = ctx.json || std::string(argv[i]) == "--json";
    ctx.deterministic = true;
    emit(ctx, argc, argv, kUsage, nullptr, {{"kind", "usage"}, {"message", e.what()}}, start);
    return kUsage;
  }
  try {
    if (*abel) code = cmd_abel(ctx, result, file);
    if (*nq) code = cmd_nq(ctx, result, file, c);
    if (*li) code = cmd_low_index(ctx, result, file, max, normal);
    if (*rs) code = cmd_rs(ctx, result, file, spec);
    if (*l2) code = cmd_l2(ctx, result, file, tower, depth, prime);
    if (*fibre) code = cmd_fibre(ctx, result, rank, qfile, fibre_class);
    if (*genus) code = cmd_genus(ctx, result, file, spec, target, c);
    if (*fox) code = cmd_fox(ctx, result, file, prime);
    if (*wit) code = cmd_witness(ctx, result, file, spec, target, candidate, witness_class, search);
    if (*build) code = cmd_build(ctx, result, name);
  } catch (const CapExceeded& e) {
    code = kCap;
    error = {{"kind", "cap"}, {"message", e.what()}};
  } catch (const NotAHomomorphism& e) {
    code = kVerdict;
    error = {{"kind", "not-a-homomorphism"}, {"relator", e.relator_index() + 1}, {"message", e.what()}};
  } catch (const ParseError& e) {
    code = kUsage;
    error = {{"kind", "parse"}, {"line", e.line()}, {"column", e.column()}, {"message", e.what()}};
  } catch (const Error& e) {
    code = kUsage;
    error = {{"kind", "invalid-input"}, {"message", e.what()}};
  }
  emit(ctx, argc, argv, code, result, error, start);
  return code;
}
