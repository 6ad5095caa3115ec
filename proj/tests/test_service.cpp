#include <gtest/gtest.h>

#include <cstdlib>
#include <thread>

#include "blaschke/service.hpp"

using namespace blaschke;
using nlohmann::json;

namespace {

std::string field_of(const std::string& text) {
  try {
    parse_complex(text, "z");
  } catch (const Error& e) {
    return e.detail().substr(0, e.detail().find(':'));
  }
  return "";
}

json body(const Response& r) { return json::parse(r.body); }

}  // namespace

TEST(ParseComplex, Forms) {
  EXPECT_EQ(parse_complex("0.5", "a"), Complex(0.5, 0.0));
  EXPECT_EQ(parse_complex("0.5i", "a"), Complex(0.0, 0.5));
  EXPECT_EQ(parse_complex("-0.5i", "a"), Complex(0.0, -0.5));
  EXPECT_EQ(parse_complex("i", "a"), Complex(0.0, 1.0));
  EXPECT_EQ(parse_complex("-i", "a"), Complex(0.0, -1.0));
  EXPECT_EQ(parse_complex("0.3+0.4i", "a"), Complex(0.3, 0.4));
  EXPECT_EQ(parse_complex("+0.3-0.4i", "a"), Complex(0.3, -0.4));
  EXPECT_EQ(parse_complex("-1.9e-6+3.15e-5i", "lambda"), Complex(-1.9e-6, 3.15e-5));
  EXPECT_EQ(parse_complex("1e-5-2E+1i", "lambda"), Complex(1e-5, -20.0));
  EXPECT_EQ(parse_complex("7.74e-6", "lambda"), Complex(7.74e-6, 0.0));
}

TEST(ParseComplex, Errors) {
  for (const char* bad : {"", "abc", "1+", "0.5j", "1+2i+3", "1..2", "i2", "1e", "nan"}) EXPECT_EQ(field_of(bad), "z") << bad;
}

TEST(ParseComplex, RoundTrip) {
  for (Complex z : {Complex(0.3, 0.4), Complex(-1.9e-6, 3.15e-5), Complex(0.5, 0.0), Complex(0.0, -0.25)})
    EXPECT_EQ(parse_complex(format_complex(z), "z"), z) << format_complex(z);
}

TEST(Service, Health) {
  Service s;
  const Response r = s.handle("/api/v1/health", {});
  EXPECT_EQ(r.status, 200);
  EXPECT_EQ(r.body, "ok");
  EXPECT_EQ(r.content_type, "text/plain");
}

TEST(Service, UnknownEndpoint) {
  Service s;
  const Response r = s.handle("/api/v1/nothing", {});
  EXPECT_EQ(r.status, 404);
  EXPECT_EQ(body(r)["error"], "not-found");
}

TEST(Service, UnperturbedCritical) {
  Service s;
  const Response r = s.handle("/api/v1/critical", {{"a", "0.5"}, {"lambda", "0"}});
  ASSERT_EQ(r.status, 200);
  const json j = body(r);
  EXPECT_EQ(j["family"], "unperturbed");
  EXPECT_NEAR(j["c_minus"][0].get<double>(), 0.381966, 1e-6);
  EXPECT_NEAR(j["c_plus"][0].get<double>(), 2.618034 / 1.0, 1e-6);
}

TEST(Service, PerturbedCritical) {
  Service s;
  const Response r = s.handle("/api/v1/critical", {{"a", "0.5i"}, {"lambda", "1e-6"}});
  ASSERT_EQ(r.status, 200);
  const json j = body(r);
  EXPECT_EQ(j["ringCriticals"].size(), 5u);
  EXPECT_EQ(j["ringZeros"].size(), 5u);
  EXPECT_EQ(j["criticalCount"], 10);
  EXPECT_LT(j["maxResidual"].get<double>(), 1e-10);
}

TEST(Service, InvalidParamsNameTheField) {
  Service s;
  Response r = s.handle("/api/v1/dynamical", {{"a", "0.5i"}, {"lambda", "1e-6"}, {"res", "32768"}});
  EXPECT_EQ(r.status, 400);
  EXPECT_EQ(body(r)["field"], "res");
  EXPECT_EQ(body(r)["error"], "invalid-params");
  r = s.handle("/api/v1/dynamical", {{"a", "half"}, {"lambda", "1e-6"}});
  EXPECT_EQ(r.status, 400);
  EXPECT_EQ(body(r)["field"], "a");
  r = s.handle("/api/v1/critical", {{"a", "1.5"}});
  EXPECT_EQ(r.status, 400);
  EXPECT_EQ(body(r)["field"], "a");
  r = s.handle("/api/v1/orbit", {{"a", "0.5i"}, {"lambda", "1e-6"}, {"x", "0.1"}});
  EXPECT_EQ(r.status, 400);
  EXPECT_EQ(body(r)["field"], "y");
  r = s.handle("/api/v1/dynamical", {{"a", "0.5i"}, {"lambda", "1e-6"}, {"res", "16"}, {"format", "png"}});
  EXPECT_EQ(body(r)["field"], "format");
  r = s.handle("/api/v1/dynamical", {{"a", "0.5i"}, {"lambda", "1e-6"}, {"res", "16"}, {"palette", "x"}});
  EXPECT_EQ(body(r)["field"], "palette");
  r = s.handle("/api/v1/dynamical", {{"a", "0.5i"}, {"lambda", "1e-6"}, {"w", "-1"}});
  EXPECT_EQ(body(r)["field"], "w");
}

TEST(Service, PreconditionFailureIs422) {
  Service s;
  const Response r = s.handle("/api/v1/dynamical", {{"a", "0.5i"}, {"lambda", "1e-4"}, {"res", "16"}});
  EXPECT_EQ(r.status, 422);
  EXPECT_EQ(body(r)["error"], "precondition-failure");
  EXPECT_EQ(body(r)["check"], "a0-d0-separation");
}

TEST(Service, DynamicalPpmAndJson) {
  Service s;
  const Query q{{"a", "0.5i"}, {"lambda", "1e-6"}, {"res", "32"}, {"maxIter", "300"}};
  const Response ppm = s.handle("/api/v1/dynamical", q);
  ASSERT_EQ(ppm.status, 200);
  EXPECT_EQ(ppm.content_type, "image/x-portable-pixmap");
  EXPECT_EQ(ppm.body.substr(0, 3), "P6\n");
  EXPECT_EQ(ppm.body.size(), std::string("P6\n32 32\n255\n").size() + 32u * 32u * 3u);
  Query qj = q;
  qj["format"] = "json";
  const Response meta = s.handle("/api/v1/dynamical", qj);
  ASSERT_EQ(meta.status, 200);
  EXPECT_EQ(body(meta)["spec"]["resolution"], 32);
}

TEST(Service, CacheIsTransparent) {
  ServiceConfig cfg;
  cfg.cache_entries = 2;
  Service cached(cfg);
  cfg.cache_entries = 0;
  Service plain(cfg);
  const Query q{{"a", "0.5i"}, {"lambda", "1e-6"}, {"res", "24"}, {"maxIter", "300"}, {"palette", "label"}};
  const Response x = cached.handle("/api/v1/dynamical", q);
  EXPECT_EQ(cached.cache().size(), 1u);
  const Response y = cached.handle("/api/v1/dynamical", q);
  const Response z = plain.handle("/api/v1/dynamical", q);
  EXPECT_EQ(x.body, y.body);
  EXPECT_EQ(x.body, z.body);
  EXPECT_EQ(plain.cache().size(), 0u);
  cached.handle("/api/v1/dynamical", {{"a", "0.5i"}, {"lambda", "2e-6"}, {"res", "16"}, {"maxIter", "100"}});
  cached.handle("/api/v1/dynamical", {{"a", "0.5i"}, {"lambda", "3e-6"}, {"res", "16"}, {"maxIter", "100"}});
  EXPECT_EQ(cached.cache().size(), 2u);
  cached.handle("/api/v1/dynamical", {{"a", "0.5i"}, {"lambda", "1e-3"}, {"res", "16"}});
  EXPECT_EQ(cached.cache().size(), 2u);
}

TEST(Service, ResponseCacheEvictsLeastRecent) {
  ResponseCache c(2);
  c.put("x", {200, "text/plain", "1"});
  c.put("y", {200, "text/plain", "2"});
  ASSERT_TRUE(c.get("x"));
  c.put("z", {200, "text/plain", "3"});
  EXPECT_TRUE(c.get("x"));
  EXPECT_FALSE(c.get("y"));
  EXPECT_EQ(c.get("z")->body, "3");
}

TEST(Service, Orbit) {
  Service s;
  const Response r = s.handle("/api/v1/orbit", {{"a", "0.5i"}, {"lambda", "1e-6"}, {"x", "0.3"}, {"y", "0.1"}});
  ASSERT_EQ(r.status, 200);
  const json j = body(r);
  for (const char* k : {"fate", "word", "escapeTime", "t0Entry", "itinerary", "final", "orbit", "z"})
    EXPECT_TRUE(j.contains(k)) << k;
  EXPECT_EQ(j["orbit"].size(), j["escapeTime"].get<std::size_t>() + 1);
}

TEST(Service, PortResolution) {
  ::unsetenv("BLASCHKE_PORT");
  EXPECT_EQ(resolve_port(9001), 9001);
  ::setenv("BLASCHKE_PORT", "9123", 1);
  EXPECT_EQ(resolve_port(9001), 9123);
  ::setenv("BLASCHKE_PORT", "http", 1);
  EXPECT_THROW(resolve_port(9001), Error);
  ::unsetenv("BLASCHKE_PORT");
}

TEST(Service, LiveServer) {
  Service service;
  httplib::Server server;
  service.mount(server);
  const int port = server.bind_to_any_port("127.0.0.1");
  ASSERT_GT(port, 0);
  std::thread t([&] { server.listen_after_bind(); });
  server.wait_until_ready();
  httplib::Client client("127.0.0.1", port);
  auto health = client.Get("/api/v1/health");
  ASSERT_TRUE(health);
  EXPECT_EQ(health->status, 200);
  EXPECT_EQ(health->body, "ok");
  auto crit = client.Get("/api/v1/critical?a=0.5&lambda=0");
  ASSERT_TRUE(crit);
  EXPECT_EQ(crit->status, 200);
  EXPECT_NEAR(json::parse(crit->body)["c_minus"][0].get<double>(), 0.381966, 1e-6);
  auto bad = client.Get("/api/v1/dynamical?a=0.5i&lambda=1e-6&res=32768");
  ASSERT_TRUE(bad);
  EXPECT_EQ(bad->status, 400);
  auto tile = client.Get("/api/v1/dynamical?a=0.5i&lambda=1e-6&res=16&maxIter=200");
  ASSERT_TRUE(tile);
  EXPECT_EQ(tile->get_header_value("Content-Type"), "image/x-portable-pixmap");
  server.stop();
  t.join();
}
