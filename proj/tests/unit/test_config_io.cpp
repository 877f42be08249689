#include <cmath>
#include <filesystem>
#include <unistd.h>

#include "doctest.h"
#include "fixtures.hpp"

using namespace gmy;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const char* name) {
  const fs::path p = fs::temp_directory_path() / ("gmy_unit_" + std::to_string(::getpid())) / name;
  fs::remove_all(p);
  return p;
}

}  // namespace

TEST_SUITE("config_io") {
  TEST_CASE("config parse, dump and parse again") {
    const RunConfig c = parse_config(R"({"schema": 1, "map": "logistic", "p": "0.2275524466120906759677",
                                         "sigma": 0.75, "n_max": 22, "lift_window": [0.05, 0.95]})");
    CHECK(c.map == "logistic");
    REQUIRE(c.p);
    CHECK(*c.p == parse_real("0.2275524466120906759677"));
    CHECK(c.n_max == 22);
    CHECK_FALSE(c.delta);
    const RunConfig d = parse_config(dump_config(c));
    CHECK(dump_config(d) == dump_config(c));
    CHECK(*d.p == *c.p);
    CHECK(*d.sigma == *c.sigma);
  }

  TEST_CASE("config errors") {
    auto kind = [](const std::string& text) {
      try {
        parse_config(text);
      } catch (const Error& e) {
        return e.kind();
      }
      return ErrorKind::Domain;
    };
    CHECK(kind(R"({"schema": 1, "mystery": 1})") == ErrorKind::Config);
    CHECK(kind(R"({"schema": 1, "n_max": "many"})") == ErrorKind::Config);
    CHECK(kind("not json") == ErrorKind::Config);
    CHECK_THROWS_AS(load_config("/nonexistent/gmy.json"), Error);
  }

  TEST_CASE("hex reals round-trip exactly") {
    for (Real x : {0.1L, 1.0L / 3, 0.2275524466120906759677L, 1e-300L, 0.0L}) CHECK(parse_real(hex_real(x)) == x);
    CHECK_THROWS_AS(parse_real("abc"), Error);
  }

  TEST_CASE("partition files round-trip") {
    const auto& f = fixture::doubling();
    const fs::path dir = scratch("partition");
    save_partition(dir.string(), "doubling", f.partition);
    const LoadedPartition L = load_partition(dir.string());
    CHECK(L.map == "doubling");
    const InducedPartition& P = L.partition;
    REQUIRE(P.elements.size() == f.partition.elements.size());
    for (std::size_t i = 0; i < P.elements.size(); ++i) {
      CHECK(P.elements[i].U == f.partition.elements[i].U);
      CHECK(P.elements[i].R == f.partition.elements[i].R);
      CHECK(P.elements[i].preball.v_n == f.partition.elements[i].preball.v_n);
    }
    CHECK(P.base.Delta == f.partition.base.Delta);
    CHECK(P.params.sigma == f.partition.params.sigma);
    CHECK(P.ledger.steps.size() == f.partition.ledger.steps.size());
    CHECK(P.remainder == f.partition.remainder);
    const fs::path again = scratch("partition2");
    save_partition(again.string(), "doubling", P);
    CHECK(read_text((again / "elements.csv").string()) == read_text((dir / "elements.csv").string()));
    CHECK(read_text((again / "partition.json").string()) == read_text((dir / "partition.json").string()));
  }

  TEST_CASE("corrupt partition files are rejected") {
    const fs::path dir = scratch("corrupt");
    save_partition(dir.string(), "doubling", fixture::doubling().partition);
    write_text((dir / "elements.csv").string(), "# schema,1\nindex,lo\n0,1\n");
    CHECK_THROWS_AS(load_partition(dir.string()), Error);
    CHECK_THROWS_AS(load_partition(scratch("missing").string()), Error);
  }

  TEST_CASE("density files round-trip") {
    const DensityEstimate d = fixture::bumpy(33, 9);
    const fs::path p = scratch("density") / "nu.csv";
    save_density(p.string(), d);
    const DensityEstimate e = load_density(p.string());
    CHECK(e.weights == d.weights);
    CHECK(e.support == d.support);
    CHECK(e.role == d.role);
  }

  TEST_CASE("analysis round-trip") {
    const Analysis& a = fixture::doubling().analysis;
    const Analysis b = analysis_from_json(to_json(a));
    CHECK(b.params.sigma == a.params.sigma);
    CHECK(b.base.Delta == a.base.Delta);
    CHECK(b.K0 == a.K0);
    CHECK(b.nue.lambda_hat == a.nue.lambda_hat);
    CHECK(to_json(b).dump() == to_json(a).dump());
    CHECK_THROWS_AS(analysis_from_json(Json{{"schema", 99}}), Error);
  }

  TEST_CASE("CSV files carry a schema line") {
    const fs::path p = scratch("csv") / "t.csv";
    write_csv(p.string(), {"a", "b"}, {{"1", "2"}});
    CHECK(read_text(p.string()) == "# schema,1\na,b\n1,2\n");
  }
}
