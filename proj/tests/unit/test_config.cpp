#include <doctest.h>

#include "spinsc/config.hpp"
#include "spinsc/errors.hpp"

using namespace spinsc;

TEST_CASE("config: parse values and types") {
    const Config c = Config::parse(R"(
top = 1
[run]
seed = 42      # comment
name = "a # b"
on = true
grid = [1e-6, 3.2e-6, 0.01]
names = ["x", "y"]
)");
    CHECK(c.get_int("", "top", 0) == 1);
    CHECK(c.get_uint("run", "seed", 0) == 42);
    CHECK(c.get_string("run", "name", "") == "a # b");
    CHECK(c.get_bool("run", "on", false));
    CHECK(c.get_doubles("run", "grid", {}) == std::vector<double>{1e-6, 3.2e-6, 0.01});
    CHECK(c.get_strings("run", "names", {}) == std::vector<std::string>{"x", "y"});
    CHECK(c.get_double("run", "missing", 2.5) == 2.5);
    CHECK_THROWS_AS(c.get_bool("run", "seed", false), ConfigError);
    CHECK_THROWS_AS(c.get_string("run", "seed", ""), ConfigError);
}

TEST_CASE("config: parse(emit(c)) == c") {
    const Config c = Config::parse("[b]\nz = 1.50\ny = \"s\"\n[a]\nk = [1, 2 , 3]\nt = false\n");
    const Config back = Config::parse(c.emit());
    CHECK(back == c);
    CHECK(back.emit() == c.emit());
    Config d;
    d.set("x", "v", 0.1);
    d.set("x", "n", std::int64_t(7));
    d.set("x", "s", std::string("hello"));
    d.set("x", "g", std::vector<double>{1.0, 2.5});
    d.set("y", "l", std::vector<std::string>{"p", "q"});
    CHECK(Config::parse(d.emit()) == d);
    CHECK(Config::parse(d.emit()).get_double("x", "v", 0) == 0.1);
}

TEST_CASE("config: malformed input is a config error") {
    CHECK_THROWS_AS(Config::parse("[run\nseed = 1\n"), ConfigError);
    CHECK_THROWS_AS(Config::parse("seed 1\n"), ConfigError);
    CHECK_THROWS_AS(Config::parse("seed = \n"), ConfigError);
    CHECK_THROWS_AS(Config::parse("seed = abc\n"), ConfigError);
    CHECK_THROWS_AS(Config::parse("a = 1\na = 2\n"), ConfigError);
    CHECK_THROWS_AS(Config::parse("g = [1, 2\n"), ConfigError);
    CHECK_THROWS_AS(Config::load("/nonexistent/spinsc.toml"), ConfigError);
}

TEST_CASE("config: unused keys are reported, not rejected") {
    const Config c = Config::parse("[run]\nseed = 1\nextra = 2\n[other]\nq = 3\n");
    c.get_int("run", "seed", 0);
    const auto u = c.unused_keys();
    CHECK(u == std::vector<std::string>{"other.q", "run.extra"});
    c.mark_used("other");
    CHECK(c.unused_keys() == std::vector<std::string>{"run.extra"});
}
