#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "srr/features.hpp"
#include "srr/rng.hpp"
#include "srr/types.hpp"

using namespace srr;

namespace {

Screen two_text_screen() {
  Screen s;
  s.id = "scr";
  s.width = 800;
  s.height = 1600;
  s.ocr_texts = {{0, "Apple Business Manager", {100, 200, 200, 30}},
                 {1, "555-0134", {100, 240, 150, 30}},
                 {2, "Far away text", {600, 1500, 150, 30}}};
  s.entities = {
      {0, 1, "555-0134", {100, 240, 150, 30}, EntityCategory::PhoneNumber}};
  return s;
}

}  // namespace

TEST_CASE("location features full-screen box on square screen") {
  Screen s;
  s.id = "sq";
  s.width = 100;
  s.height = 100;
  s.ocr_texts = {{0, "x", {0, 0, 100, 100}}};
  s.entities = {{0, 0, "x", {0, 0, 100, 100}, EntityCategory::Url}};
  auto f = location_features(s.entities[0], &s);
  CHECK(f[0] == 0.0);
  CHECK(f[1] == 0.0);
  CHECK(f[2] == 1.0);
  CHECK(f[3] == 1.0);
  CHECK(f[4] == 1.0);
}

TEST_CASE("location features match the normalized worked example") {
  // A box whose K-normalized [x, y, w, h] is [0.04, 0.36, 0.4, 0.03].
  Screen s;
  s.id = "phone";
  s.width = 500;
  s.height = 1000;  // K = 1000
  BBox b{0.04 * 1000, 0.36 * 1000, 0.4 * 1000, 0.03 * 1000};
  s.ocr_texts = {{0, "+91 9998888", b}};
  s.entities = {{0, 0, "+91 9998888", b, EntityCategory::PhoneNumber}};
  auto f = location_features(s.entities[0], &s);
  CHECK(f[0] == doctest::Approx(0.04).epsilon(1e-9));
  CHECK(f[1] == doctest::Approx(0.36).epsilon(1e-9));
  CHECK(f[2] == doctest::Approx(0.44).epsilon(1e-9));
  CHECK(f[3] == doctest::Approx(0.39).epsilon(1e-9));
  CHECK(f[4] == doctest::Approx(0.012).epsilon(1e-9));
}

TEST_CASE("only entity of its category has zero context block") {
  Screen s = two_text_screen();
  auto f = location_features(s.entities[0], &s);
  for (int i = 5; i < kLocFeatureDim; ++i) CHECK(f[i] == 0.0);
}

TEST_CASE("dummy entity yields all-zero location features") {
  Entity dummy{0, -1, "555-0100", {0, 0, 0, 0}, EntityCategory::PhoneNumber};
  auto f = location_features(dummy, nullptr);
  for (double v : f) CHECK(v == 0.0);
}

TEST_CASE("location features scale invariance") {
  Rng rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    Screen s;
    s.width = 800;
    s.height = 1600;
    double scale = rng.real(0.25, 4.0);
    Entity e{0, 0, "e",
             {rng.real(0, 400), rng.real(0, 800), rng.real(10, 300),
              rng.real(10, 100)},
             EntityCategory::Url};
    Entity other{1, 1, "o",
                 {rng.real(0, 400), rng.real(0, 800), rng.real(10, 300),
                  rng.real(10, 100)},
                 EntityCategory::Url};
    s.ocr_texts = {{0, "e", e.bbox}, {1, "o", other.bbox}};
    s.entities = {e, other};
    auto f1 = location_features(e, &s);

    Screen scaled = s;
    scaled.width = static_cast<int>(s.width * scale);
    scaled.height = static_cast<int>(s.height * scale);
    double k1 = std::max(s.width, s.height);
    double k2 = std::max(scaled.width, scaled.height);
    double exact = k2 / k1;  // keep K exactly proportional despite int dims
    for (auto& t : scaled.ocr_texts) {
      t.bbox = {t.bbox.x * exact, t.bbox.y * exact, t.bbox.w * exact,
                t.bbox.h * exact};
    }
    for (auto& en : scaled.entities) {
      en.bbox = {en.bbox.x * exact, en.bbox.y * exact, en.bbox.w * exact,
                 en.bbox.h * exact};
    }
    auto f2 = location_features(scaled.entities[0], &scaled);
    for (int i = 0; i < kLocFeatureDim; ++i) {
      CHECK(f1[i] == doctest::Approx(f2[i]).epsilon(1e-12));
    }
  }
}

TEST_CASE("location features translation property") {
  Screen s = two_text_screen();
  s.entities.push_back(
      {1, 2, "555-9999", {600, 1500, 150, 30}, EntityCategory::PhoneNumber});
  double k = std::max(s.width, s.height);
  double dx = 30, dy = 40;
  auto f1 = location_features(s.entities[0], &s);
  Screen moved = s;
  for (auto& t : moved.ocr_texts) {
    t.bbox.x += dx;
    t.bbox.y += dy;
  }
  for (auto& e : moved.entities) {
    e.bbox.x += dx;
    e.bbox.y += dy;
  }
  auto f2 = location_features(moved.entities[0], &moved);
  for (int block = 0; block < 1 + kContextEntities; ++block) {
    int base = 5 * block;
    bool empty = f1[base + 4] == 0.0;  // zero padding stays zero
    if (empty) continue;
    CHECK(f2[base + 0] - f1[base + 0] == doctest::Approx(dx / k));
    CHECK(f2[base + 1] - f1[base + 1] == doctest::Approx(dy / k));
    CHECK(f2[base + 4] == doctest::Approx(f1[base + 4]));
  }
}

TEST_CASE("word overlap worked examples") {
  auto req = tokenize("call the apple business manager number");
  CHECK(word_overlap(req, "Apple Business Manager", default_stopwords()) ==
        doctest::Approx(1.0));
  CHECK(word_overlap(req, "the of and", default_stopwords()) == 0.0);
  CHECK(word_overlap(req, "zebra quartz", default_stopwords()) == 0.0);
}

TEST_CASE("digit overlap worked examples") {
  auto req = tokenize("call 1 866 902 7144");
  CHECK(digit_overlap(req, "1-866-902-7144") == doctest::Approx(1.0));
  CHECK(digit_overlap(tokenize("call this"), "1-866-902-7144") == 0.0);
  CHECK(digit_overlap(req, "no digits here") == 0.0);
}

TEST_CASE("overlap is monotone under adding matching tokens") {
  Rng rng(5);
  std::vector<std::string> vocab = {"alpha", "beta", "gamma", "delta", "42",
                                    "support", "7144"};
  for (int trial = 0; trial < 200; ++trial) {
    std::string text;
    for (int i = 0; i < 4; ++i) {
      text += rng.pick(vocab);
      text += " ";
    }
    std::vector<std::string> req;
    for (int i = 0; i < 3; ++i) req.push_back(rng.pick(vocab));
    double w1 = word_overlap(req, text, default_stopwords());
    double d1 = digit_overlap(req, text);
    req.push_back(rng.pick(vocab));
    double w2 = word_overlap(req, text, default_stopwords());
    double d2 = digit_overlap(req, text);
    CHECK(w2 >= w1);
    CHECK(d2 >= d1);
  }
}

TEST_CASE("containment worked examples") {
  CHECK(containment("call 1-866-902-7144", "1-866-902-7144") == 1);
  CHECK(containment("call this", "+91 9998888") == 0);
  CHECK(containment("call this", "") == 0);
  CHECK(containment("open EXAMPLE.com now", "example.com") == 1);
}

TEST_CASE("text match features: neighbor label overlap shows up") {
  Screen s = two_text_screen();
  Request req{"r", "call the apple business manager number",
              tokenize("call the apple business manager number")};
  auto f = text_match_features(req, s.entities[0], &s, default_stopwords());
  REQUIRE(static_cast<int>(f.size()) == kTextFeatureDim);
  // Nearest neighbor is the label; its word overlap should be 1.
  CHECK(f[3 + 1] == doctest::Approx(1.0));
  // Self text has no overlap with this request.
  CHECK(f[1] == 0.0);
}

TEST_CASE("text match features: category-level dummy has zero neighbors") {
  Entity dummy{2, -1, "https://example.com", {0, 0, 0, 0}, EntityCategory::Url};
  Request req{"r", "open https://example.com", tokenize("open https example com")};
  auto f = text_match_features(req, dummy, nullptr, default_stopwords());
  for (int i = 3; i < kTextFeatureDim; ++i) CHECK(f[i] == 0.0);
  CHECK(f[0] == 1);
}

TEST_CASE("neighbor blocks follow distance order") {
  Screen s = two_text_screen();
  Request req{"r", "call the far away text", tokenize("call the far away text")};
  auto f = text_match_features(req, s.entities[0], &s, default_stopwords());
  // Neighbor 1 = label (no overlap with this request), neighbor 2 = far text.
  CHECK(f[3 + 1] == 0.0);
  CHECK(f[6 + 1] > 0.0);
}
