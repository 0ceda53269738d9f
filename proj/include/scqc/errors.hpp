#pragma once

#include <stdexcept>
#include <string>

namespace scqc {

// Error taxonomy used across the library. The CLI serializes code_name()
// plus the optional JSON payload as its machine-readable error record.
enum class errc {
    domain_error,
    degenerate_parameterization,
    frame_ambiguity,
    capacity,
    resolution,
    convergence,
    input,
    reconstruction,
    fit,
    config,
    io_error,
};

const char* errc_name(errc code);

class error : public std::runtime_error {
public:
    error(errc code, const std::string& msg, std::string payload_json = "")
        : std::runtime_error(msg), code_(code), payload_(std::move(payload_json)) {}

    errc code() const { return code_; }
    const char* code_name() const { return errc_name(code_); }
    // JSON string with extra context (best-found certificates, offending values); may be empty.
    const std::string& payload() const { return payload_; }

private:
    errc code_;
    std::string payload_;
};

[[noreturn]] inline void raise(errc code, const std::string& msg, std::string payload = "") {
    throw error(code, msg, std::move(payload));
}

} // namespace scqc
