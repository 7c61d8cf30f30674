#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <numbers>
#include <sstream>

#include "loschmidt/verify.hpp"

using namespace loschmidt;

namespace {
VerifyConfig quick_config() {
    VerifyConfig cfg;
    cfg.grid_points = 6;
    cfg.mc_samples = 60'000;
    cfg.seed = 424242;
    return cfg;
}
}  // namespace

TEST_CASE("registry covers every bound and identity family") {
    const auto ids = check_registry();
    CHECK(ids.size() >= 20);
    for (const char* required :
         {"eq3.6.identity", "hermite.orthogonality", "quad2d.methods.agree",
          "wronskian.normalization", "trajectory.ode.residual", "energy.conservation",
          "changevar.eq5.10", "weights.sum.unity", "weights.finite.families",
          "groundstate.eigen.residual", "lemma3.2.recurrence", "sec3.minima",
          "gq.symmetric.closedform", "gq.lower.third", "prop4.3.lower", "prop4.3.upper",
          "eq3.8.ball.lower", "eq3.9.ball.vanish", "prop4.5.cusp", "prop6.3.gauss",
          "prop6.3.ball", "prop6.4.gauss.floor", "prop6.4.ball.floor",
          "asympt.gauss.value", "asympt.ball.value", "eq5.20.ball.bound"}) {
        CAPTURE(required);
        CHECK(std::find(ids.begin(), ids.end(), required) != ids.end());
    }
    // ids are unique
    auto sorted = ids;
    std::sort(sorted.begin(), sorted.end());
    CHECK(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end());
}

TEST_CASE("unknown check ids are rejected with the registry listed") {
    try {
        run_one("no.such.check", quick_config());
        FAIL("expected an exception");
    } catch (const std::invalid_argument& e) {
        const std::string msg = e.what();
        CHECK(msg.find("no.such.check") != std::string::npos);
        CHECK(msg.find("lemma3.2.recurrence") != std::string::npos);
    }
}

TEST_CASE("individual paper checks pass") {
    const VerifyConfig cfg = quick_config();
    for (const char* id : {"lemma3.2.recurrence", "gq.symmetric.closedform", "sec3.minima",
                           "weights.finite.families"}) {
        const CheckResult r = run_one(id, cfg);
        CAPTURE(id, r.detail);
        CHECK(r.status == CheckStatus::pass);
    }
    const CheckResult eq36 = run_one("eq3.6.identity", cfg);
    CHECK(eq36.status == CheckStatus::pass);
    CHECK(eq36.margin >= 0.0);
}

TEST_CASE("mutated ball radius is caught by prop6.3.ball") {
    VerifyConfig cfg = quick_config();
    cfg.unstable_ball_radius = 1.0;  // deliberately wrong; sqrt(3) is required
    const CheckResult r = run_one("prop6.3.ball", cfg);
    CAPTURE(r.detail);
    CHECK(r.status == CheckStatus::fail);
}

TEST_CASE("vacuous bounds auto-pass with a note") {
    VerifyConfig cfg = quick_config();
    cfg.g_values = {10.0};
    const CheckResult r = run_one("eq3.8.ball.lower", cfg);
    CAPTURE(r.detail);
    CHECK(r.status == CheckStatus::pass);
    CHECK(r.detail.find("vacuous") != std::string::npos);
}

TEST_CASE("reports are deterministic given config and seed") {
    VerifyConfig cfg = quick_config();
    cfg.g_values = {1.0};
    cfg.threads = 2;
    const char* subset[] = {"prop6.3.ball", "asympt.ball.value", "eq3.6.identity"};
    for (const char* id : subset) {
        const CheckResult a = run_one(id, cfg);
        const CheckResult b = run_one(id, cfg);
        CHECK(a.margin == b.margin);
        CHECK(a.status == b.status);
    }
}

TEST_CASE("report serialization carries one record per check") {
    Report report;
    report.config = quick_config();
    report.results.push_back({"lemma3.2.recurrence", CheckStatus::pass, 1e-9, 0.0, "ok"});
    report.results.push_back({"prop6.3.ball", CheckStatus::fail, -0.2, 1e-3, "broken"});

    std::ostringstream text;
    write_report_text(text, report);
    CHECK(text.str().find("lemma3.2.recurrence") != std::string::npos);
    CHECK(text.str().find("fail") != std::string::npos);

    std::ostringstream kv;
    write_report_kv(kv, report);
    CHECK(kv.str().find("check.lemma3.2.recurrence.status=pass") != std::string::npos);
    CHECK(kv.str().find("check.prop6.3.ball.status=fail") != std::string::npos);
    CHECK(kv.str().find("meta.seed=424242") != std::string::npos);

    CHECK(!report.all_passed());
}

TEST_CASE("inconclusive shields monte-carlo noise from failing") {
    // a tiny sample budget cannot resolve percent-level claims
    VerifyConfig cfg = quick_config();
    cfg.mc_samples = 2'000;
    cfg.grid_points = 4;
    const CheckResult r = run_one("asympt.ball.value", cfg);
    CHECK(r.status != CheckStatus::fail);
}
