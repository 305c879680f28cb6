#include <doctest.h>

#include <filesystem>

#include "spinsc/arith_gen.hpp"
#include "spinsc/assignment_io.hpp"
#include "spinsc/errors.hpp"

using namespace spinsc;

TEST_CASE("assignment csv round trip") {
    const auto rca = build_rca(15);
    DeviceParams p;
    const OperatingModel m = OperatingModel::abstract(p, 0.1);
    const auto a = ipdb(rca.network).assignment;
    const auto path = (std::filesystem::temp_directory_path() / "spinsc_unit_assign.csv").string();
    save_assignment(path, rca.network, a, m);
    const auto b = load_assignment(path, rca.network, &m);
    for (std::size_t g = 0; g < a.size(); ++g) {
        CHECK(b.df[g] == a.df[g]);
        CHECK(b.cf[g] == doctest::Approx(a.cf[g]).epsilon(1e-12));
    }
    const std::string text = assignment_csv(rca.network, a, m);
    CHECK(text.rfind("gate_id,tag,delay_factor,delay_s,current_A,energy_J,epsilon\n", 0) == 0);
    std::filesystem::remove(path);
    CHECK_THROWS_AS(load_assignment("/nonexistent.csv", rca.network), ConfigError);
}

TEST_CASE("bit tables map onto rca(15) gates") {
    const auto rca = build_rca(15);
    const BitTable t = ed_table_2b();
    REQUIRE(t.size() == 15);
    const auto a = assignment_from_table(rca.network, t);
    CHECK(table_from_assignment(rca.network, a) == t);
    // Row 0 is the MSB stage; m3 of stage k is gate 4k + 3.
    CHECK(a.df[4 * 14 + 3] == t[0][0]);
    CHECK(a.df[3] == t[14][0]);
    CHECK_THROWS(assignment_from_table(build_rca(4).network, t));
}
