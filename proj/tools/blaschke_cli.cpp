// blaschke: render, classify, search and verify from the command line.
// Exit status: 0 success, 1 domain error, 2 usage error.

#include <iostream>
#include <map>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "blaschke/service.hpp"
#include "blaschke/verify.hpp"

using namespace blaschke;
using nlohmann::json;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

Complex cx(const std::string& text, const std::string& flag) {
  try {
    return parse_complex(text, flag);
  } catch (const Error& e) {
    throw UsageError(e.detail());
  }
}

json provenance(const std::string& command, const std::map<std::string, std::string>& args, std::uint64_t seed) {
  return {{"engine", std::string(kEngineVersion)}, {"command", command}, {"args", args}, {"seed", seed}};
}

void print(const json& j) { std::cout << j.dump(2) << "\n"; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Escape-time engine for singularly perturbed Blaschke products"};
  app.require_subcommand(1);
  std::uint64_t seed = 20240601;
  int workers = 0;
  app.add_option("--seed", seed, "Seed recorded in emitted JSON and used by randomised checks");
  app.add_option("--workers", workers, "Worker threads (0 = hardware concurrency)");

  // shared option storage
  std::string a_text = "0.5i", lambda_text, center_text = "0", z_text, out_path, meta_path, palette = "classic";
  double width = 3.0;
  int res = 512, max_iter = 2000;
  std::size_t min_area = 1;

  auto* dyn = app.add_subcommand("render-dyn", "Render the dynamical plane");
  dyn->add_option("--a", a_text, "Parameter a, e.g. 0.5i")->required();
  dyn->add_option("--lambda", lambda_text, "Parameter lambda, e.g. -1.9e-6+3.15e-5i")->required();
  dyn->add_option("--center", center_text, "Viewport centre");
  dyn->add_option("--width", width, "Viewport width");
  dyn->add_option("--res", res, "Resolution in pixels per side");
  dyn->add_option("--max-iter", max_iter, "Iteration budget");
  dyn->add_option("--out", out_path, "PPM output path");
  dyn->add_option("--meta", meta_path, "JSON metadata output path");
  dyn->add_option("--palette", palette, "classic or label")->check(CLI::IsMember({"classic", "label"}));
  dyn->add_option("--min-area", min_area, "Smallest component listed in the metadata");

  auto* par = app.add_subcommand("render-param", "Render the parameter plane (fate of c_-)");
  par->add_option("--a", a_text, "Parameter a")->required();
  par->add_option("--center", center_text, "Viewport centre in the lambda plane")->required();
  par->add_option("--width", width, "Viewport width")->required();
  par->add_option("--res", res, "Resolution in pixels per side");
  par->add_option("--max-iter", max_iter, "Iteration budget");
  par->add_option("--out", out_path, "PPM output path");
  par->add_option("--meta", meta_path, "JSON metadata output path");
  par->add_option("--palette", palette, "classic or label")->check(CLI::IsMember({"classic", "label"}));
  par->add_option("--min-area", min_area, "Smallest component listed in the metadata");

  bool with_orbit = false;
  auto* cls = app.add_subcommand("classify", "Fate of one starting point");
  cls->add_option("--a", a_text, "Parameter a")->required();
  cls->add_option("--lambda", lambda_text, "Parameter lambda")->required();
  cls->add_option("--z", z_text, "Starting point")->required();
  cls->add_option("--max-iter", max_iter, "Iteration budget");
  cls->add_flag("--orbit", with_orbit, "Include the orbit");

  std::string which;
  double box_width = 0.0;
  auto* fc = app.add_subcommand("find-case", "Search for a parameter realising case a, b or c");
  fc->add_option("--a", a_text, "Parameter a")->required();
  fc->add_option("--case", which, "a, b or c")->required()->check(CLI::IsMember({"a", "b", "c"}));
  fc->add_option("--center", center_text, "Search box centre in the lambda plane")->required();
  fc->add_option("--width", box_width, "Search box width (default: a tenth of |centre|)");

  double rho_max = 7e-5;
  int n_radii = 48, n_angles = 96;
  bool no_confirm = false;
  auto* dr = app.add_subcommand("detect-rings", "Scan a polar lambda grid for ring bands");
  dr->add_option("--a", a_text, "Parameter a")->required();
  dr->add_option("--rho-max", rho_max, "Outer radius of the grid");
  dr->add_option("--radii", n_radii, "Number of radii");
  dr->add_option("--angles", n_angles, "Number of angles");
  dr->add_flag("--no-confirm", no_confirm, "Skip the dynamical-plane check that a band surrounds 0");

  std::string only, json_path;
  auto* ver = app.add_subcommand("verify", "Run the acceptance criteria");
  ver->add_option("--only", only, "Run a single criterion");
  ver->add_option("--json", json_path, "Also write the report to this path");

  int port = kDefaultPort;
  std::size_t cache_entries = 64;
  auto* srv = app.add_subcommand("serve", "Serve the HTTP API");
  srv->add_option("--port", port, "Port (BLASCHKE_PORT overrides)");
  srv->add_option("--cache", cache_entries, "Tile cache entries (0 disables)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (dyn->parsed() || par->parsed()) {
      const bool is_dyn = dyn->parsed();
      PlaneSpec s;
      s.kind = is_dyn ? PlaneKind::Dynamical : PlaneKind::Parameter;
      s.params = MapParams::perturbed(cx(a_text, "a"), is_dyn ? cx(lambda_text, "lambda") : Complex(1e-6));
      s.center = cx(center_text, "center");
      s.width = width;
      s.resolution = res;
      s.max_iter = max_iter;
      const RasterGrid g = render(s, workers);
      json meta = meta_json(g, label_components(g), min_area);
      std::map<std::string, std::string> args{{"a", a_text},          {"center", center_text},
                                              {"width", format_complex(width)}, {"res", std::to_string(res)},
                                              {"maxIter", std::to_string(max_iter)}, {"palette", palette}};
      if (is_dyn) args["lambda"] = lambda_text;
      meta["provenance"] = provenance(is_dyn ? "render-dyn" : "render-param", args, seed);
      if (!out_path.empty()) write_file(out_path, encode_image(g, palette));
      if (!meta_path.empty()) write_file(meta_path, meta.dump(2) + "\n");
      if (out_path.empty() && meta_path.empty()) print(meta);
      else
        print({{"written", {out_path, meta_path}}, {"components", meta["components"].size()},
               {"provenance", meta["provenance"]}});
      return 0;
    }
    if (cls->parsed()) {
      const MapParams p = MapParams::perturbed(cx(a_text, "a"), cx(lambda_text, "lambda"));
      const Complex z = cx(z_text, "z");
      const StructuralRegions R = locate_regions(p);
      json j = fate_json(classify_orbit(z, p, R, max_iter, with_orbit));
      j["z"] = complex_json(z);
      j["provenance"] = provenance("classify", {{"a", a_text}, {"lambda", lambda_text}, {"z", z_text},
                                                {"maxIter", std::to_string(max_iter)}}, seed);
      print(j);
      return 0;
    }
    if (fc->parsed()) {
      const Complex a = cx(a_text, "a");
      PlaneSpec box;
      box.kind = PlaneKind::Parameter;
      box.params = MapParams::perturbed(a, 1e-6);
      box.center = cx(center_text, "center");
      box.width = box_width > 0.0 ? box_width : 0.1 * std::abs(box.center);
      FindOptions opt;
      opt.render.workers = workers;
      const CaseReport r = find_case(a, which[0], box, opt);
      json j = detail::case_json(r);
      j["a"] = complex_json(a);
      j["trace"] = r.trace;
      nlohmann::json grids = nlohmann::json::array();
      for (const auto& g : r.grids) grids.push_back(spec_json(g));
      j["grids"] = grids;
      j["provenance"] = provenance("find-case", {{"a", a_text}, {"case", which}, {"center", center_text},
                                                 {"width", format_complex(box.width)}}, seed);
      print(j);
      return 0;
    }
    if (dr->parsed()) {
      RingOptions opt;
      opt.confirm = !no_confirm;
      const RingReport rep = detect_rings(cx(a_text, "a"), rho_max, n_radii, n_angles, opt);
      json rings = json::array();
      for (const auto& r : rep.rings)
        rings.push_back({{"itinerary", r.word}, {"rhoMin", r.rho_min}, {"rhoMax", r.rho_max}, {"samples", r.samples},
                         {"surroundsOriginChecked", r.surrounds_origin_checked},
                         {"surroundsOrigin", r.surrounds_origin}});
      print({{"rings", rings},
             {"lowConfidence", rep.low_confidence},
             {"provenance", provenance("detect-rings", {{"a", a_text}, {"rhoMax", format_complex(rho_max)},
                                                        {"radii", std::to_string(n_radii)},
                                                        {"angles", std::to_string(n_angles)}}, seed)}});
      return 0;
    }
    if (ver->parsed()) {
      VerifyConfig cfg;
      cfg.only = only;
      cfg.seed = seed;
      cfg.workers = workers;
      const json report = verify_report(cfg, verify_all(cfg));
      if (!json_path.empty()) write_file(json_path, report.dump(2) + "\n");
      print(report);
      return report["pass"].get<bool>() ? 0 : 1;
    }
    if (srv->parsed()) {
      ServiceConfig cfg;
      cfg.workers = workers;
      cfg.cache_entries = cache_entries;
      Service service(cfg);
      httplib::Server server;
      service.mount(server);
      const int p = resolve_port(port);
      std::cerr << "listening on 0.0.0.0:" << p << "\n";
      if (!server.listen("0.0.0.0", p)) {
        std::cerr << "cannot bind port " << p << "\n";
        return 1;
      }
      return 0;
    }
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n" << app.help();
    return 2;
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    return 1;
  }
  return 2;
}
