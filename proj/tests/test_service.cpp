#include <doctest.h>

#include <thread>

#include "fordspine/service.hpp"
#include "support.hpp"

using namespace fordspine;
namespace fs = std::filesystem;

namespace {

Service make_service(const char* f) {
    const auto& l = support::fixture(f);
    return Service(l.m, l.od);
}

json body(const HttpResponse& r) { return json::parse(r.body); }

json strip_revision(json j) {
    j.erase("revision");
    return j;
}

std::string heights_arg(const std::vector<double>& h) {
    std::ostringstream s;
    s.precision(17);
    for (std::size_t i = 0; i < h.size(); ++i) s << (i ? "," : "") << h[i];
    return s.str();
}

} // namespace

TEST_CASE("state and revision bookkeeping") {
    Service svc = make_service("figure_eight");
    auto st = body(svc.handle("GET", "/state"));
    CHECK(st["revision"] == 1);
    CHECK(st["verdict"]["pass"] == true);
    const auto h = support::fixture("figure_eight").od.family.scales.heights;

    auto ok = svc.handle("POST", "/scales", json{{"scales", h}}.dump());
    CHECK(ok.status == 200);
    CHECK(body(ok)["revision"] == 2);

    std::vector<double> doubled = {h[0] / 2};
    auto bad = svc.handle("POST", "/scales", json{{"scales", doubled}}.dump());
    CHECK(bad.status == 422);
    auto bj = body(bad);
    CHECK_FALSE(bj["violations"].empty());
    CHECK(bj["revision"] == 2);
    CHECK(svc.revision() == 2);

    auto tau = svc.handle("POST", "/tau", R"({"tau": 1.5})");
    CHECK(tau.status == 200);
    CHECK(body(tau)["tau"] == 1.5);
    CHECK(body(tau)["revision"] == 3);
    CHECK(body(tau)["deformed_pairing_residual"].get<double>() < 1e-9);
    CHECK(svc.handle("POST", "/tau", R"({"tau": -1})").status == 422);
}

TEST_CASE("requests that cannot be served") {
    Service svc = make_service("figure_eight");
    CHECK(svc.handle("GET", "/nowhere").status == 404);
    CHECK(svc.handle("GET", "/cusps/3/tessellation").status == 404);
    CHECK(svc.handle("DELETE", "/state").status == 405);
    CHECK(svc.handle("POST", "/scales", "not json").status == 400);
    CHECK(svc.handle("POST", "/scales", R"({"scales": [1, 2]})").status == 400);
    CHECK(svc.handle("POST", "/scales", R"({"scales": [-1]})").status == 400);
    CHECK(svc.revision() == 1);
}

TEST_CASE("a post during a recompute gets 409 and reads keep working") {
    Service svc = make_service("figure_eight");
    auto lock = svc.hold_write_lock();
    auto r = svc.handle("POST", "/tau", R"({"tau": 1})");
    CHECK(r.status == 409);
    // reads are served from the current snapshot while the writer holds the lock
    std::thread reader([&] { CHECK(svc.handle("GET", "/complex").status == 200); });
    reader.join();
    lock.unlock();
    CHECK(svc.handle("POST", "/tau", R"({"tau": 1})").status == 200);
}

TEST_CASE("every response reflects one revision") {
    Service svc = make_service("whitehead");
    const auto& l = support::fixture("whitehead");
    std::vector<double> a = l.od.family.scales.heights;
    std::vector<double> b = maximal_admissible(l.od, {std::sqrt(2.0), 1 / std::sqrt(2.0)}).heights;
    std::atomic<bool> stop{false};
    std::atomic<int> torn{0};
    std::thread reader([&] {
        while (!stop) {
            auto s = body(svc.handle("GET", "/state"));
            auto c = body(svc.handle("GET", "/cusps/0/tessellation"));
            // heights in a tessellation and its revision come from one snapshot
            long rev = c["revision"].get<long>();
            bool odd = rev % 2 == 1;
            double expect = odd ? a[0] : b[0];
            if (std::abs(c["height"].get<double>() - expect) > 1e-12) ++torn;
            (void)s;
        }
    });
    for (int k = 0; k < 6; ++k) {
        auto r = svc.handle("POST", "/scales", json{{"scales", k % 2 == 0 ? b : a}}.dump());
        CHECK(r.status == 200);
    }
    stop = true;
    reader.join();
    CHECK(torn == 0);
}

TEST_CASE("CLI and service agree, and exports are deterministic") {
    auto dir = support::scratch_dir("parity");
    const auto h = support::fixture("whitehead").od.family.scales.heights;
    std::string fixture = support::fixture_path("whitehead");
    int rc1 = support::run_cli("compute --fixture \"" + fixture + "\" --out \"" + (dir / "a").string() + "\"", dir / "a.log");
    int rc2 = support::run_cli("compute --fixture \"" + fixture + "\" --scales " + heights_arg(h) + " --out \"" +
                                   (dir / "b").string() + "\"",
                               dir / "b.log");
    CHECK(rc1 == 0);
    CHECK(rc2 == 0);
    for (const char* f : {"cusp0_tessellation.json", "cusp1_tessellation.json", "complex.json", "verdict.json",
                          "scales.json", "dual.json", "weighted_points.json"}) {
        std::string x = support::read_file(dir / "a" / f);
        CHECK_FALSE(x.empty());
        CHECK(x == support::read_file(dir / "b" / f));
    }

    Service svc = make_service("whitehead");
    CHECK(svc.handle("POST", "/scales", json{{"scales", h}}.dump()).status == 200);
    auto file = [&](const char* f) { return json::parse(support::read_file(dir / "a" / f)); };
    CHECK(strip_revision(body(svc.handle("GET", "/cusps/0/tessellation"))) == file("cusp0_tessellation.json"));
    CHECK(strip_revision(body(svc.handle("GET", "/cusps/1/tessellation"))) == file("cusp1_tessellation.json"));
    CHECK(strip_revision(body(svc.handle("GET", "/complex"))) == file("complex.json"));
    CHECK(strip_revision(body(svc.handle("GET", "/dual"))) == file("dual.json"));
    CHECK(strip_revision(body(svc.handle("GET", "/scales/admissible"))) == file("scales.json"));
    CHECK(body(svc.handle("GET", "/state"))["verdict"] == file("verdict.json"));
    fs::remove_all(dir);
}

TEST_CASE("CLI exit codes") {
    auto dir = support::scratch_dir("exits");
    std::string f8 = "--fixture \"" + support::fixture_path("figure_eight") + "\"";
    CHECK(support::run_cli("compute " + f8 + " --out \"" + (dir / "ok").string() + "\"", dir / "1.log") == 0);
    CHECK(support::read_file(dir / "1.log").find("CAT(0) pass") != std::string::npos);
    CHECK(support::run_cli("compute " + f8 + " --scale-factor 2 --out \"" + (dir / "dbl").string() + "\"", dir / "2.log") == 2);
    CHECK(support::read_file(dir / "2.log").find("violations") != std::string::npos);
    CHECK(support::run_cli("compute " + f8 + " --eps 0.9 --out \"" + (dir / "eps").string() + "\"", dir / "3.log") == 3);
    CHECK(support::run_cli("compute", dir / "4.log") == 64);
    CHECK(support::run_cli("frobnicate", dir / "5.log") == 64);

    CHECK(support::run_cli("deform " + f8 + " --tau-grid 0,1,2 --out \"" + (dir / "deform.json").string() + "\"",
                           dir / "6.log") == 0);
    json d = json::parse(support::read_file(dir / "deform.json"));
    CHECK(d["schema"] == "fordspine/deformation@1");
    CHECK(d["lengths_decreasing"] == true);

    CHECK(support::run_cli("reconstruct --points \"" + (dir / "ok" / "weighted_points.json").string() + "\"",
                           dir / "7.log") == 0);
    CHECK(support::read_file(dir / "7.log").find("round trip: pass") != std::string::npos);

    CHECK(support::run_cli("export " + f8 + " --svg \"" + (dir / "svg").string() + "\"", dir / "8.log") == 0);
    std::string svg = support::read_file(dir / "svg" / "cusp0.svg");
    CHECK(svg.rfind("<svg", 0) == 0);
    CHECK(svg.find("data-cell=\"3\"") != std::string::npos);
    fs::remove_all(dir);
}

TEST_CASE("check on a hand-broken complex file") {
    auto dir = support::scratch_dir("check");
    std::string f8 = "--fixture \"" + support::fixture_path("figure_eight") + "\"";
    REQUIRE(support::run_cli("compute " + f8 + " --out \"" + dir.string() + "\"", dir / "c.log") == 0);
    CHECK(support::run_cli("check --complex \"" + (dir / "complex.json").string() + "\"", dir / "ok.log") == 0);

    json c = json::parse(support::read_file(dir / "complex.json"));
    // shrink the link edges of vertex 0 so that a triangle is shorter than 2 pi
    for (auto& e : c["links"][0]["edges"]) e["length"] = 1.0;
    std::ofstream(dir / "broken.json") << c.dump(2);
    CHECK(support::run_cli("check --complex \"" + (dir / "broken.json").string() + "\"", dir / "bad.log") == 2);
    std::string log = support::read_file(dir / "bad.log");
    CHECK(log.find("witness cycle") != std::string::npos);
    CHECK(log.find("\"links_large\": false") != std::string::npos);

    ComplexFileCheck direct = check_complex_json(c);
    CHECK_FALSE(direct.links_large);
    CHECK(direct.failing_link == 0);
    CHECK(direct.witness.size() >= 2);
    fs::remove_all(dir);
}
