#include <doctest.h>

#include "data.hpp"

using namespace canonconn;
using testing_util::data_path;
using testing_util::load_json;

namespace {

const char* kAlgebras[] = {"heisenberg23", "rolling235", "free2_n3", "free2_n4", "contact_std", "contact_two_eigen"};
const char* kFrames[] = {"heis_model", "heis_perturbed", "heis_perturbed2", "rolling_nilpotent", "rolling_model",
                         "free2_n3_nilpotent", "free2_n3_model", "free2_n3_model_origin", "contact_std_model",
                         "contact_two_eigen_model", "underfull_frame"};

bool same_spec(const CarnotSpec& a, const CarnotSpec& b) {
  if (a.step != b.step || a.layer_dims != b.layer_dims || a.labels != b.labels || !(a.gram_minus1 == b.gram_minus1) ||
      a.brackets.size() != b.brackets.size())
    return false;
  for (std::size_t i = 0; i < a.brackets.size(); ++i)
    if (a.brackets[i].left != b.brackets[i].left || a.brackets[i].right != b.brackets[i].right ||
        a.brackets[i].result != b.brackets[i].result)
      return false;
  return true;
}

}  // namespace

TEST_CASE("fixture files round-trip") {
  for (auto name : kAlgebras) {
    CAPTURE(name);
    auto doc = load_json(data_path(std::string("algebras/") + name + ".json"));
    CarnotSpec spec = io::algebra_from_json(doc);
    io::json again = io::algebra_to_json(spec);
    CHECK(again == doc);
    CHECK(same_spec(io::algebra_from_json(again), spec));
  }
  for (auto name : kFrames) {
    CAPTURE(name);
    auto p = data_path(std::string("frames/") + name + ".json");
    auto doc = load_json(p);
    auto ff = io::frame_from_json(doc, p.parent_path());
    io::json again = io::frame_to_json(ff);
    CHECK(again == doc);
    auto back = io::frame_from_json(again, p.parent_path());
    CHECK(back.model.fields == ff.model.fields);
    CHECK(back.model.point == ff.model.point);
    CHECK(same_spec(back.symbol, ff.symbol));
  }
  // inline symbol
  auto ff = testing_util::load_frame("heis_model");
  ff.symbol_path.clear();
  io::json inl = io::frame_to_json(ff);
  CHECK(inl["symbol"].is_object());
  CHECK(same_spec(io::frame_from_json(inl, ".").symbol, ff.symbol));
}

TEST_CASE("parse errors name the location") {
  auto doc = load_json(data_path("algebras/heisenberg23.json"));
  doc["brackets"][0]["result"] = {{"b_7", "1"}};
  try {
    io::algebra_from_json(doc);
    FAIL("expected Parse");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Parse);
    CHECK(std::string(e.what()).find("brackets[0].result.b_7") != std::string::npos);
  }
  doc = load_json(data_path("algebras/heisenberg23.json"));
  doc["gram_minus1"][1][1] = 1;
  CHECK_THROWS_AS(io::algebra_from_json(doc), Error);
  try {
    io::parse_json("{\"step\": 2,", "x.json");
    FAIL("expected Parse");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Parse);
  }
}

TEST_CASE("fnv1a64 reference values") {
  CHECK(io::fnv1a64("") == 0xcbf29ce484222325ULL);
  CHECK(io::fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
  CHECK(io::fnv1a64("foobar") == 0x85944171f73967e8ULL);
}

TEST_CASE("check command") {
  auto r = io::cmd_check(data_path("algebras/heisenberg23.json"));
  CHECK(r.exit_code == 0);
  CHECK(r.report["results"]["dim_g0"] == 1);
  CHECK(r.report["results"]["tanaka_rigidity"] == true);
  auto f = io::cmd_check(data_path("algebras/free2_n3.json"));
  CHECK(f.report["results"]["dim_g0"] == 3);
  auto c = io::cmd_check(data_path("algebras/contact_std.json"));
  CHECK(c.report["results"]["dim_g0"] == 4);
  auto bad = io::cmd_check(data_path("algebras/malformed_brackets.json"));
  CHECK(bad.exit_code == 1);
  CHECK(bad.report["error"]["kind"] == "NotAntisymmetric");
  auto missing = io::cmd_check(data_path("algebras/does_not_exist.json"));
  CHECK(missing.exit_code == 1);
}

TEST_CASE("complex command") {
  auto r1 = io::cmd_complex(data_path("algebras/heisenberg23.json"), 1);
  CHECK(r1.exit_code == 0);
  auto r2 = io::cmd_complex(data_path("algebras/heisenberg23.json"), 2);
  auto slice1 = [](const io::Outcome& o) {
    for (const auto& s : o.report["results"]["slices"])
      if (s["homogeneity"] == 1) return s["dim"].get<int>();
    return -1;
  };
  CHECK(slice1(r1) == 4);
  CHECK(slice1(r2) == 4);
  for (const auto& id : r2.report["results"]["identities"]) CHECK(id["holds"] == true);
  CHECK(io::cmd_complex(data_path("algebras/heisenberg23.json"), 9).exit_code == 1);
}

TEST_CASE("normalize command") {
  auto alg = data_path("algebras/heisenberg23.json");
  auto z = io::cmd_normalize(alg, data_path("kappa/heisenberg23_zero.json"));
  CHECK(z.exit_code == 0);
  CHECK(z.report["results"]["alpha_1"].empty());
  auto b = io::cmd_normalize(alg, data_path("kappa/heisenberg23_basis0.json"));
  CHECK(b.exit_code == 0);
  CHECK(b.report["results"]["kappa_1"].empty());
  CHECK_FALSE(b.report["results"]["alpha_1"].empty());
  auto bad = io::cmd_normalize(data_path("algebras/rolling235.json"), data_path("kappa/rolling235_bianchi_violating.json"));
  CHECK(bad.exit_code == 2);
  CHECK(bad.report["error"]["kind"] == "Inconsistent");
  CHECK_FALSE(bad.report["error"]["residual"].empty());
  // wrong length
  CHECK(io::cmd_normalize(data_path("algebras/rolling235.json"), data_path("kappa/heisenberg23_zero.json")).exit_code == 1);
}

TEST_CASE("frame command") {
  auto h = io::cmd_frame(data_path("frames/heis_model.json"));
  CHECK(h.exit_code == 0);
  CHECK(h.report["results"]["grading_frame"]["B"] == io::json::array({"0", "0", "1"}));
  for (const auto& w : h.report["results"]["omega"]) CHECK(w == io::json::array({"0"}));
  auto p = io::cmd_frame(data_path("frames/heis_perturbed.json"));
  CHECK(p.report["results"]["grading_frame"]["B"] == io::json::array({"1", "0", "1"}));
  for (const auto& c : p.report["results"]["oracle"]["agreement"]) CHECK(c["pass"] == true);
  auto roll = io::cmd_frame(data_path("frames/rolling_model.json"));
  CHECK(roll.exit_code == 2);
  CHECK(roll.report["results"]["oracle"]["structure"]["eta1"] == "-1/3");
  CHECK(io::cmd_frame(data_path("frames/underfull_frame.json")).exit_code == 1);
}

TEST_CASE("reports are deterministic") {
  for (auto name : {"heis_perturbed2", "contact_two_eigen_model", "rolling_model"}) {
    CAPTURE(name);
    auto p = data_path(std::string("frames/") + name + ".json");
    CHECK(io::serialize(io::cmd_frame(p).report) == io::serialize(io::cmd_frame(p).report));
  }
}
