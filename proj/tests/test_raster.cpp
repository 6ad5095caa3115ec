#include <gtest/gtest.h>

#include <functional>

#include "blaschke/encode.hpp"

using namespace blaschke;

namespace {

// Grid over [-1,1]^2 whose pixels take word "1A" where `in` holds and "~" elsewhere.
RasterGrid synthetic(int res, const std::function<bool(Complex)>& in) {
  RasterGrid g;
  g.spec.center = 0.0;
  g.spec.width = 2.0;
  g.spec.resolution = res;
  g.labels.resize(static_cast<std::size_t>(res) * res);
  OrbitFate esc;
  esc.kind = FateKind::EscapeThroughT0;
  esc.escape_time = 3;
  esc.t0_entry = 2;
  esc.itinerary = "1";
  esc.final_region = FinalRegion::A0;
  const OrbitFate stay;
  for (int i = 0; i < res; ++i)
    for (int j = 0; j < res; ++j)
      g.labels[static_cast<std::size_t>(i) * res + j] =
          make_label(in(g.spec.pixel_center(i, j)) ? esc : stay, g.words);
  return g;
}

const ComponentStats& only_with(const ComponentMap& cm, const std::string& word) {
  const auto ids = components_with_word(cm, word);
  EXPECT_EQ(ids.size(), 1u);
  return cm.stats[static_cast<std::size_t>(ids.at(0))];
}

}  // namespace

TEST(Components, DiskIsSimplyConnected) {
  const RasterGrid g = synthetic(64, [](Complex z) { return std::abs(z) < 0.5; });
  const ComponentMap cm = label_components(g);
  const auto& s = only_with(cm, "1A");
  EXPECT_EQ(s.connectivity, 1);
  EXPECT_FALSE(s.truncated);
  EXPECT_EQ(only_with(cm, "~").connectivity, 2);
}

TEST(Components, AnnulusHasOneHole) {
  const RasterGrid g = synthetic(96, [](Complex z) { return std::abs(z) > 0.3 && std::abs(z) < 0.7; });
  const ComponentMap cm = label_components(g);
  const auto ids = components_with_word(cm, "1A");
  ASSERT_EQ(ids.size(), 1u);
  EXPECT_EQ(cm.stats[static_cast<std::size_t>(ids[0])].connectivity, 2);
  EXPECT_TRUE(surrounds(g, cm, ids[0], 0.0));
  EXPECT_FALSE(surrounds(g, cm, ids[0], 0.9));
  EXPECT_EQ(components_with_word(cm, "~").size(), 2u);
}

TEST(Components, TwoHoles) {
  const RasterGrid g = synthetic(96, [](Complex z) {
    return std::abs(z) < 0.8 && std::abs(z - 0.35) > 0.15 && std::abs(z + 0.35) > 0.15;
  });
  const ComponentMap cm = label_components(g);
  EXPECT_EQ(only_with(cm, "1A").connectivity, 3);
}

TEST(Components, DiagonalPixelsAreSeparate) {
  // 4-connectivity: a checkerboard has one component per pixel
  RasterGrid g = synthetic(16, [](Complex) { return false; });
  OrbitFate esc;
  esc.kind = FateKind::EscapeThroughT0;
  esc.final_region = FinalRegion::D0;
  for (int i = 0; i < 16; ++i)
    for (int j = 0; j < 16; ++j)
      if ((i + j) % 2) g.labels[static_cast<std::size_t>(i) * 16 + j] = make_label(esc, g.words);
  EXPECT_EQ(label_components(g).stats.size(), 256u);
}

TEST(Components, TruncatedAtEdge) {
  const RasterGrid g = synthetic(32, [](Complex z) { return z.real() > 0.5; });
  EXPECT_TRUE(only_with(label_components(g), "1A").truncated);
}

TEST(Components, MarkersAreReported) {
  const RasterGrid g = synthetic(32, [](Complex z) { return std::abs(z) < 0.5; });
  const ComponentMap cm = label_components(g, {{"origin", 0.0}, {"corner", {0.9, 0.9}}});
  EXPECT_EQ(only_with(cm, "1A").contains, std::vector<std::string>{"origin"});
  EXPECT_EQ(only_with(cm, "~").contains, std::vector<std::string>{"corner"});
}

TEST(RayVote, InsideAndOutside) {
  const RasterGrid g = synthetic(64, [](Complex z) { return std::abs(z) > 0.3 && std::abs(z) < 0.6; });
  EXPECT_EQ(ray_vote(g, 0.0, "1A").vote, RayVote::Inside);
  EXPECT_EQ(ray_vote(g, 0.0, "1A").hits, 8);
  EXPECT_TRUE(ray_containment(g, 0.0, "1A"));
  EXPECT_FALSE(ray_containment(g, {0.8, 0.0}, "1A"));
  EXPECT_THROW(ray_vote(g, 3.0, "1A"), Error);
}

TEST(RayVote, SplitIsInconclusive) {
  // only the rays heading into the upper half plane (3) plus the east ray (1) hit
  const RasterGrid g = synthetic(64, [](Complex z) { return z.imag() > 0.1 || (z.real() > 0.3 && std::abs(z.imag()) < 0.05); });
  const RayResult r = ray_vote(g, 0.0, "1A");
  EXPECT_EQ(r.hits, 4);
  EXPECT_EQ(r.vote, RayVote::Inconclusive);
  try {
    ray_containment(g, 0.0, "1A");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::inconclusive);
  }
}

TEST(PlaneSpec, PixelMapping) {
  PlaneSpec s;
  s.center = {1.0, -2.0};
  s.width = 4.0;
  s.resolution = 4;
  EXPECT_EQ(s.pixel_center(0, 0), Complex(-0.5, -0.5));
  EXPECT_EQ(s.pixel_center(3, 3), Complex(2.5, -3.5));
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      const auto px = s.pixel_of(s.pixel_center(i, j));
      ASSERT_TRUE(px);
      EXPECT_EQ(px->first, i);
      EXPECT_EQ(px->second, j);
    }
  EXPECT_FALSE(s.pixel_of({3.5, 0.0}));
  EXPECT_DOUBLE_EQ(s.pixel_size(), 1.0);
}

TEST(PlaneSpec, ValidateNamesTheField) {
  auto field = [](const PlaneSpec& s) {
    try {
      s.validate();
    } catch (const Error& e) {
      return e.detail().substr(0, e.detail().find(':'));
    }
    return std::string();
  };
  PlaneSpec s;
  EXPECT_EQ(field(s), "");
  s.resolution = 8;
  EXPECT_EQ(field(s), "resolution");
  s = {};
  s.width = 0.0;
  EXPECT_EQ(field(s), "width");
  s = {};
  s.max_iter = 0;
  EXPECT_EQ(field(s), "maxIter");
  s = {};
  s.center = {std::nan(""), 0.0};
  EXPECT_EQ(field(s), "center");
  s = {};
  s.kind = PlaneKind::Parameter;
  s.params.a = 1.5;
  EXPECT_EQ(field(s), "a");
}

TEST(Encode, TwoByTwoPpmIs23Bytes) {
  RasterGrid g = synthetic(16, [](Complex) { return false; });
  g.spec.resolution = 2;
  g.labels.resize(4);
  const std::string ppm = encode_image(g);
  EXPECT_EQ(ppm.size(), 23u);
  EXPECT_EQ(ppm.substr(0, 11), "P6\n2 2\n255\n");
  EXPECT_EQ(static_cast<unsigned char>(ppm[11]), 0);
  EXPECT_EQ(static_cast<unsigned char>(ppm[12]), 255);
}

TEST(Encode, Palettes) {
  PixelLabel l;
  EXPECT_EQ(pixel_colour(l, "classic"), (Rgb{0, 255, 0}));
  EXPECT_EQ(pixel_colour(l, "label"), (Rgb{0, 0, 0}));
  l.kind = FateKind::EscapeThroughT0;
  l.escape_time = 0;
  EXPECT_EQ(pixel_colour(l, "classic"), (Rgb{255, 255, 0}));
  l.escape_time = 40;
  EXPECT_EQ(pixel_colour(l, "classic"), (Rgb{255, 0, 0}));
  l.failed = true;
  EXPECT_EQ(pixel_colour(l, "classic"), (Rgb{128, 128, 128}));
  EXPECT_THROW(pixel_colour(l, "viridis"), Error);
  const RasterGrid g = synthetic(16, [](Complex) { return true; });
  EXPECT_THROW(encode_image(g, "viridis"), Error);
}

TEST(Encode, LabelPaletteSeparatesWords) {
  std::map<std::uint64_t, std::string> words;
  OrbitFate f;
  f.kind = FateKind::EscapeThroughT0;
  f.final_region = FinalRegion::A0;
  f.itinerary = "0";
  const PixelLabel x = make_label(f, words);
  f.itinerary = "1";
  const PixelLabel y = make_label(f, words);
  EXPECT_NE(pixel_colour(x, "label"), pixel_colour(y, "label"));
}

TEST(Render, DynamicalMetaSchema) {
  PlaneSpec s;
  s.params = MapParams::perturbed({0.0, 0.5}, 1e-6);
  s.resolution = 48;
  s.max_iter = 500;
  const RasterGrid g = render(s, 1);
  ASSERT_TRUE(g.regions);
  const auto j = nlohmann::json::parse(encode_meta(g));
  for (const char* k : {"spec", "engine", "regions", "components", "componentsOmitted", "ambiguousPx", "failedPx"})
    EXPECT_TRUE(j.contains(k)) << k;
  EXPECT_EQ(j["spec"]["planeKind"], "dynamical");
  EXPECT_EQ(j["spec"]["resolution"], 48);
  ASSERT_FALSE(j["components"].empty());
  for (const auto& c : j["components"]) {
    for (const char* k : {"id", "fate", "itinerary", "areaPx", "connectivity", "truncated", "meanRadius", "contains"})
      EXPECT_TRUE(c.contains(k)) << k;
    if (c["fate"] == "escape-through-t0") {
      EXPECT_TRUE(c.contains("final"));
      EXPECT_TRUE(c.contains("t0Entry"));
    }
  }
  std::size_t area = 0;
  for (const auto& c : j["components"]) area += c["areaPx"].get<std::size_t>();
  EXPECT_EQ(area + j["ambiguousPx"].get<std::size_t>(), 48u * 48u);
}

TEST(Render, DeterministicAcrossWorkers) {
  PlaneSpec s;
  s.params = MapParams::perturbed({0.0, 0.5}, 1e-6);
  s.resolution = 64;
  s.max_iter = 500;
  const std::string one = encode_image(render(s, 1)) + encode_meta(render(s, 1));
  const std::string many = encode_image(render(s, 4)) + encode_meta(render(s, 4));
  EXPECT_EQ(one, many);

  PlaneSpec p;
  p.kind = PlaneKind::Parameter;
  p.params = MapParams::perturbed({0.0, 0.5}, 1e-6);
  p.center = {0.0, 2e-5};
  p.width = 2e-5;
  p.resolution = 16;
  p.max_iter = 500;
  EXPECT_EQ(encode_image(render(p, 1)), encode_image(render(p, 3)));
}

TEST(Render, KindMismatchThrows) {
  PlaneSpec s;
  s.kind = PlaneKind::Parameter;
  EXPECT_THROW(render_dynamical(s), Error);
  s.kind = PlaneKind::Dynamical;
  EXPECT_THROW(render_parameter(s), Error);
}

TEST(Render, FarOutsideEscapesDirectly) {
  PlaneSpec s;
  s.params = MapParams::perturbed({0.0, 0.5}, 1e-6);
  s.center = 50.0;
  s.width = 1.0;
  s.resolution = 16;
  const RasterGrid g = render(s, 1);
  for (const auto& l : g.labels) EXPECT_EQ(g.word_of(l), "*");
}
