#include "fordspine/service.hpp"

#include <httplib.h>

#include <regex>

namespace fordspine {

namespace {

HttpResponse reply(int status, const json& j) { return {status, dump(j)}; }

HttpResponse error_reply(int status, const std::string& kind, const std::string& message, long revision) {
    return reply(status, {{"error", kind}, {"message", message}, {"revision", revision}});
}

json state_json(const Service::Snapshot& s) {
    return {{"revision", s.revision},
            {"heights", s.result.scales.heights},
            {"tau", s.tau},
            {"deformed_pairing_residual", s.deformed_pairing_residual},
            {"cell_counts",
             [&] {
                 json a = json::array();
                 for (const auto& T : s.result.ensemble->cusps) a.push_back(T.cells.size());
                 return a;
             }()},
            {"verdict", verdict_json(s.result)}};
}

} // namespace

json with_revision(json artifact, long revision) {
    artifact["revision"] = revision;
    return artifact;
}

Service::Service(ManifoldPresentation m, OrbitData orbits) : m_(std::move(m)), orbits_(std::move(orbits)) {
    auto s = make_snapshot(1, orbits_.family.scales, 0.0);
    if (!s) fail(ErrorKind::ValidationFailed, "canonical scales are not admissible");
    current_ = std::move(s);
}

std::shared_ptr<Service::Snapshot> Service::make_snapshot(long revision, const CuspScales& scales, double tau) const {
    auto s = std::make_shared<Snapshot>();
    s->revision = revision;
    s->tau = tau;
    s->result = run_pipeline(m_, orbits_, scales);
    if (!s->result.computed) return s;
    s->deformed_pairing_residual = deform_cells(*s->result.ensemble, tau).pairing_residual;
    return s;
}

std::shared_ptr<const Service::Snapshot> Service::snapshot() const {
    std::lock_guard<std::mutex> g(pointer_);
    return current_;
}

void Service::install(std::shared_ptr<const Snapshot> s) {
    std::lock_guard<std::mutex> g(pointer_);
    current_ = std::move(s);
}

HttpResponse Service::post_scales(const json& body) {
    auto cur = snapshot();
    if (!body.is_object() || !body.contains("scales") || !body["scales"].is_array())
        return error_reply(400, "bad-request", "expected {\"scales\": [h_0, ...]}", cur->revision);
    CuspScales sc;
    for (const auto& x : body["scales"]) {
        if (!x.is_number()) return error_reply(400, "bad-request", "scales must be numbers", cur->revision);
        sc.heights.push_back(x.get<double>());
    }
    if (sc.heights.size() != orbits_.orbits.size())
        return error_reply(400, "bad-request", "expected one scale per cusp", cur->revision);
    for (double h : sc.heights)
        if (!(h > 0.0) || !std::isfinite(h))
            return error_reply(400, "bad-request", "scales must be positive", cur->revision);

    std::unique_lock<std::mutex> lock(write_, std::try_to_lock);
    if (!lock.owns_lock()) return error_reply(409, "busy", "a recompute is in flight", cur->revision);
    cur = snapshot();
    std::shared_ptr<Snapshot> next;
    try {
        next = make_snapshot(cur->revision + 1, sc, cur->tau);
    } catch (const Error& e) {
        return error_reply(422, to_string(e.kind()), e.what(), cur->revision);
    }
    if (!next->result.computed) return reply(422, with_revision(scales_json(next->result), cur->revision));
    install(next);
    return reply(200, state_json(*next));
}

HttpResponse Service::post_tau(const json& body) {
    auto cur = snapshot();
    if (!body.is_object() || !body.contains("tau") || !body["tau"].is_number())
        return error_reply(400, "bad-request", "expected {\"tau\": t}", cur->revision);
    double tau = body["tau"].get<double>();
    if (!(tau >= 0.0) || !std::isfinite(tau))
        return error_reply(422, "invalid-argument", "tau must be finite and nonnegative", cur->revision);

    std::unique_lock<std::mutex> lock(write_, std::try_to_lock);
    if (!lock.owns_lock()) return error_reply(409, "busy", "a recompute is in flight", cur->revision);
    cur = snapshot();
    auto next = std::make_shared<Snapshot>(*cur);
    next->revision = cur->revision + 1;
    next->tau = tau;
    next->deformed_pairing_residual = deform_cells(*cur->result.ensemble, tau).pairing_residual;
    install(next);
    return reply(200, state_json(*next));
}

HttpResponse Service::handle(const std::string& method, const std::string& path, const std::string& body) {
    static const std::regex cusp_route(R"(/cusps/(\d+)/tessellation)");
    auto s = snapshot();
    try {
        if (method == "GET") {
            std::smatch mt;
            if (path == "/state") return reply(200, state_json(*s));
            if (path == "/complex") return reply(200, with_revision(complex_json(s->result), s->revision));
            if (path == "/dual") return reply(200, with_revision(dual_json(s->result), s->revision));
            if (path == "/scales/admissible") return reply(200, with_revision(scales_json(s->result), s->revision));
            if (std::regex_match(path, mt, cusp_route)) {
                std::size_t i = std::stoul(mt[1].str());
                if (i >= s->result.ensemble->cusps.size())
                    return error_reply(404, "not-found", "no such cusp", s->revision);
                return reply(200, with_revision(tessellation_json(s->result.ensemble->cusps[i]), s->revision));
            }
        } else if (method == "POST") {
            if (path == "/scales" || path == "/tau") {
                json j;
                try {
                    j = json::parse(body);
                } catch (const json::parse_error&) {
                    return error_reply(400, "bad-request", "body is not JSON", s->revision);
                }
                return path == "/scales" ? post_scales(j) : post_tau(j);
            }
        } else {
            return error_reply(405, "method-not-allowed", method, s->revision);
        }
    } catch (const std::exception& e) {
        return error_reply(500, "internal", e.what(), s->revision);
    }
    return error_reply(404, "not-found", path, s->revision);
}

bool Service::serve(const std::string& host, int port) {
    httplib::Server server;
    auto bridge = [this](const httplib::Request& req, httplib::Response& res) {
        HttpResponse r = handle(req.method, req.path, req.body);
        res.status = r.status;
        res.set_content(r.body, "application/json");
        res.set_header("Access-Control-Allow-Origin", "*");
    };
    server.Get(".*", bridge);
    server.Post(".*", bridge);
    return server.listen(host, port);
}

} // namespace fordspine
