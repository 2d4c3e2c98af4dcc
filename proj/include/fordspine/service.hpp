#pragma once

#include <memory>
#include <mutex>
#include <string>

#include "fordspine/export.hpp"

namespace fordspine {

struct HttpResponse {
    int status = 200;
    std::string body;
};

// One fixture per session. Orbits are computed once at construction; a POST
// recomputes only the scale-dependent stages. Every response is produced from
// a single immutable snapshot and carries that snapshot's revision.
class Service {
public:
    struct Snapshot {
        long revision = 0;
        double tau = 0.0;
        PipelineResult result;
        double deformed_pairing_residual = 0.0;
    };

    Service(ManifoldPresentation m, OrbitData orbits);

    // Pure dispatcher, no sockets involved. Used by serve() and by the tests.
    HttpResponse handle(const std::string& method, const std::string& path, const std::string& body = "");

    // Blocks until the server stops.
    bool serve(const std::string& host, int port);

    std::shared_ptr<const Snapshot> snapshot() const;
    long revision() const { return snapshot()->revision; }

    // Test hook: holding the returned lock makes the next POST see a recompute in flight.
    std::unique_lock<std::mutex> hold_write_lock() { return std::unique_lock<std::mutex>(write_); }

private:
    HttpResponse post_scales(const json& body);
    HttpResponse post_tau(const json& body);
    void install(std::shared_ptr<const Snapshot> s);
    std::shared_ptr<Snapshot> make_snapshot(long revision, const CuspScales& scales, double tau) const;

    ManifoldPresentation m_;
    OrbitData orbits_;
    std::mutex write_;              // serializes recomputes
    mutable std::mutex pointer_;    // guards only the pointer swap
    std::shared_ptr<const Snapshot> current_;
};

// The artifact as a file export would hold it, plus the revision it reflects.
json with_revision(json artifact, long revision);

} // namespace fordspine
