#pragma once

#include <list>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>

#include "httplib.h"
#include "json.hpp"

#include "blaschke/encode.hpp"
#include "blaschke/parse.hpp"

namespace blaschke {

inline constexpr int kServiceMaxResolution = 4096;
inline constexpr int kDefaultPort = 8080;

using Query = std::map<std::string, std::string>;

struct Response {
  int status = 200;
  std::string content_type = "application/json";
  std::string body;
};

/// Least-recently-used map from full query to response.
class ResponseCache {
 public:
  explicit ResponseCache(std::size_t capacity) : capacity_(capacity) {}

  std::optional<Response> get(const std::string& key) {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = index_.find(key);
    if (it == index_.end()) return std::nullopt;
    order_.splice(order_.begin(), order_, it->second);
    return it->second->second;
  }

  void put(const std::string& key, const Response& r) {
    if (capacity_ == 0) return;
    std::lock_guard<std::mutex> lock(mu_);
    if (auto it = index_.find(key); it != index_.end()) {
      it->second->second = r;
      order_.splice(order_.begin(), order_, it->second);
      return;
    }
    order_.emplace_front(key, r);
    index_[key] = order_.begin();
    if (order_.size() > capacity_) {
      index_.erase(order_.back().first);
      order_.pop_back();
    }
  }

  std::size_t size() const {
    std::lock_guard<std::mutex> lock(mu_);
    return order_.size();
  }

 private:
  std::size_t capacity_;
  mutable std::mutex mu_;
  std::list<std::pair<std::string, Response>> order_;
  std::unordered_map<std::string, std::list<std::pair<std::string, Response>>::iterator> index_;
};

struct ServiceConfig {
  int workers = 0;
  std::size_t cache_entries = 64;
  int max_resolution = kServiceMaxResolution;
};

namespace detail {

inline Response json_response(int status, const nlohmann::json& j) { return {status, "application/json", j.dump() + "\n"}; }

/// invalid_params becomes 400 with the field, precondition_failure 422 with
/// the check, other domain errors 422 with their code.
inline Response error_response(const Error& e) {
  const std::string& d = e.detail();
  const auto colon = d.find(':');
  const std::string head = colon == std::string::npos ? d : d.substr(0, colon);
  nlohmann::json j{{"error", std::string(to_string(e.code()))}, {"message", d}};
  if (e.code() == Errc::invalid_params) {
    j["field"] = head;
    return json_response(400, j);
  }
  if (e.code() == Errc::precondition_failure) j["check"] = head;
  return json_response(422, j);
}

inline const std::string* find(const Query& q, const std::string& key) {
  auto it = q.find(key);
  return it == q.end() ? nullptr : &it->second;
}

inline Complex complex_param(const Query& q, const std::string& key, std::optional<Complex> fallback = std::nullopt) {
  if (const std::string* v = find(q, key)) return parse_complex(*v, key);
  if (fallback) return *fallback;
  throw Error(Errc::invalid_params, key + ": required");
}

inline double real_param(const Query& q, const std::string& key, std::optional<double> fallback = std::nullopt) {
  if (const std::string* v = find(q, key)) {
    double x = 0.0;
    if (!parse_real(*v, x)) throw Error(Errc::invalid_params, key + ": not a number");
    return x;
  }
  if (fallback) return *fallback;
  throw Error(Errc::invalid_params, key + ": required");
}

inline int int_param(const Query& q, const std::string& key, int fallback) {
  const std::string* v = find(q, key);
  if (!v) return fallback;
  int x = 0;
  const auto [ptr, ec] = std::from_chars(v->data(), v->data() + v->size(), x);
  if (ec != std::errc() || ptr != v->data() + v->size()) throw Error(Errc::invalid_params, key + ": not an integer");
  return x;
}

inline PlaneSpec plane_param(const Query& q, PlaneKind kind, const ServiceConfig& cfg) {
  PlaneSpec s;
  s.kind = kind;
  const Complex a = complex_param(q, "a");
  const Complex lambda = kind == PlaneKind::Dynamical ? complex_param(q, "lambda") : Complex(1e-6);
  s.params = MapParams::perturbed(a, lambda);
  s.center = {real_param(q, "cx", 0.0), real_param(q, "cy", 0.0)};
  s.width = real_param(q, "w", kind == PlaneKind::Dynamical ? 3.0 : 1.4e-4);
  s.resolution = int_param(q, "res", kind == PlaneKind::Dynamical ? 512 : 128);
  s.max_iter = int_param(q, "maxIter", 2000);
  if (s.resolution < kMinResolution || s.resolution > cfg.max_resolution)
    throw Error(Errc::invalid_params, "res: must lie in [" + std::to_string(kMinResolution) + ", " +
                                          std::to_string(cfg.max_resolution) + "]");
  if (!(s.width > 0.0)) throw Error(Errc::invalid_params, "w: must be > 0");
  if (s.max_iter < 1 || s.max_iter > 100000) throw Error(Errc::invalid_params, "maxIter: must lie in [1, 100000]");
  s.params.validate();
  return s;
}

inline Response plane(const Query& q, PlaneKind kind, const ServiceConfig& cfg) {
  const PlaneSpec s = plane_param(q, kind, cfg);
  const std::string* fmt = find(q, "format");
  if (fmt && *fmt != "json" && *fmt != "ppm") throw Error(Errc::invalid_params, "format: expected json or ppm");
  const std::string* pal = find(q, "palette");
  const std::string palette = pal ? *pal : "classic";
  if (palette != "classic" && palette != "label") throw Error(Errc::invalid_params, "palette: expected classic or label");
  const RasterGrid g = render(s, cfg.workers);
  if (fmt && *fmt == "json") return {200, "application/json", encode_meta(g)};
  return {200, "image/x-portable-pixmap", encode_image(g, palette)};
}

inline Response orbit(const Query& q) {
  const MapParams p = MapParams::perturbed(complex_param(q, "a"), complex_param(q, "lambda"));
  p.validate();
  const Complex z{real_param(q, "x"), real_param(q, "y")};
  const int max_iter = int_param(q, "maxIter", 2000);
  if (max_iter < 1 || max_iter > 100000) throw Error(Errc::invalid_params, "maxIter: must lie in [1, 100000]");
  const StructuralRegions R = locate_regions(p);
  const OrbitFate f = classify_orbit(z, MapEvaluator(p), R, max_iter, true);
  nlohmann::json j = fate_json(f);
  j["z"] = complex_json(z);
  return json_response(200, j);
}

inline Response critical(const Query& q) {
  const Complex a = complex_param(q, "a");
  const Complex lambda = complex_param(q, "lambda", Complex{});
  if (lambda == Complex{}) {
    const MapParams p = MapParams::unperturbed(a);
    p.validate();
    const FreeCriticalPoints c = unperturbed_critical_points(a);
    return json_response(200, {{"family", "unperturbed"},
                               {"a", complex_json(a)},
                               {"c_plus", complex_json(c.c_plus)},
                               {"c_minus", complex_json(c.c_minus)}});
  }
  const MapParams p = MapParams::perturbed(a, lambda);
  p.validate();
  nlohmann::json j = critical_json(critical_set(p));
  j["family"] = "perturbed";
  j["a"] = complex_json(a);
  j["lambda"] = complex_json(lambda);
  return json_response(200, j);
}

inline std::string cache_key(const std::string& path, const Query& q) {
  std::string k = path;
  for (const auto& [name, v] : q) k += "&" + name + "=" + v;
  return k;
}

}  // namespace detail

/// Stateless request handler; identical (path, query) pairs give identical bytes.
class Service {
 public:
  explicit Service(ServiceConfig cfg = {}) : cfg_(cfg), cache_(cfg.cache_entries) {}

  Response handle(const std::string& path, const Query& q) {
    if (path == "/api/v1/health") return {200, "text/plain", "ok"};
    const bool cacheable = path == "/api/v1/dynamical" || path == "/api/v1/parameter";
    const std::string key = detail::cache_key(path, q);
    if (cacheable)
      if (auto hit = cache_.get(key)) return *hit;
    Response r;
    try {
      if (path == "/api/v1/dynamical") r = detail::plane(q, PlaneKind::Dynamical, cfg_);
      else if (path == "/api/v1/parameter") r = detail::plane(q, PlaneKind::Parameter, cfg_);
      else if (path == "/api/v1/orbit") r = detail::orbit(q);
      else if (path == "/api/v1/critical") r = detail::critical(q);
      else return detail::json_response(404, {{"error", "not-found"}, {"message", "no endpoint " + path}});
    } catch (const Error& e) {
      return detail::error_response(e);
    }
    if (cacheable && r.status == 200) cache_.put(key, r);
    return r;
  }

  const ResponseCache& cache() const { return cache_; }

  /// Registers every endpoint on an httplib server.
  void mount(httplib::Server& server) {
    for (const char* path : {"/api/v1/health", "/api/v1/dynamical", "/api/v1/parameter", "/api/v1/orbit",
                             "/api/v1/critical"}) {
      const std::string p = path;
      server.Get(p, [this, p](const httplib::Request& req, httplib::Response& res) {
        Query q;
        for (const auto& [k, v] : req.params) q[k] = v;
        const Response r = handle(p, q);
        res.status = r.status;
        res.set_content(r.body, r.content_type);
      });
    }
  }

 private:
  ServiceConfig cfg_;
  ResponseCache cache_;
};

/// BLASCHKE_PORT, when set to a valid port, wins over the flag value.
inline int resolve_port(int flag_port) {
  if (const char* env = std::getenv("BLASCHKE_PORT")) {
    int p = 0;
    const std::string_view s(env);
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), p);
    if (ec == std::errc() && ptr == s.data() + s.size() && p > 0 && p < 65536) return p;
    throw Error(Errc::invalid_params, "BLASCHKE_PORT: not a valid port");
  }
  return flag_port;
}

}  // namespace blaschke
