#include "ctmatrix/export_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>

#include "ctmatrix/errors.hpp"

namespace ctm {

namespace {

// %.17g guarantees exact round-trip of every finite double and never emits
// locale-dependent punctuation, so the serialized bytes are reproducible.
std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string fmt(int x) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%d", x);
    return buf;
}

// Empty cell for a value that never materialized (non-finite marks those).
std::string csv_num(double x) { return std::isfinite(x) ? fmt(x) : std::string(); }

std::string csv_escape(const std::string& field) {
    if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

std::string json_escape(const std::string& text) {
    std::string out = "\"";
    for (char c : text) {
        switch (c) {
        case '"': out += "\\\""; break;
        case '\\': out += "\\\\"; break;
        case '\n': out += "\\n"; break;
        case '\r': out += "\\r"; break;
        case '\t': out += "\\t"; break;
        default:
            if (static_cast<unsigned char>(c) < 0x20) {
                char buf[8];
                std::snprintf(buf, sizeof buf, "\\u%04x", c);
                out += buf;
            } else {
                out += c;
            }
        }
    }
    out += '"';
    return out;
}

// JSON has no NaN/inf literal; a row that failed carries null.
std::string json_num(double x) { return std::isfinite(x) ? fmt(x) : std::string("null"); }

} // namespace

std::string to_csv(const std::vector<GridRow>& rows) {
    std::string out = "k,k_prime,cos_theta,omega,eta,gamma,representation,value,abs_err_est,flags\n";
    for (const GridRow& r : rows) {
        out += fmt(r.k);
        out += ',';
        out += fmt(r.k_prime);
        out += ',';
        out += fmt(r.cos_theta);
        out += ',';
        out += csv_num(r.omega);
        out += ',';
        out += csv_num(r.eta);
        out += ',';
        out += fmt(r.gamma);
        out += ',';
        out += representation_name(r.rep);
        out += ',';
        out += csv_num(r.value);
        out += ',';
        out += csv_num(r.abs_err_est);
        out += ',';
        out += csv_escape(flags_to_string(r.flags));
        out += '\n';
    }
    return out;
}

std::string to_json(const std::vector<GridRow>& rows) {
    std::string out = "{\"schema_version\":1,\"kind\":\"grid\",\"rows\":[";
    bool first = true;
    for (const GridRow& r : rows) {
        if (!first) out += ',';
        first = false;
        out += "{\"k\":" + json_num(r.k);
        out += ",\"k_prime\":" + json_num(r.k_prime);
        out += ",\"cos_theta\":" + json_num(r.cos_theta);
        out += ",\"omega\":" + json_num(r.omega);
        out += ",\"eta\":" + json_num(r.eta);
        out += ",\"gamma\":" + json_num(r.gamma);
        out += ",\"representation\":" + json_escape(representation_name(r.rep));
        out += ",\"value\":" + json_num(r.value);
        out += ",\"abs_err_est\":" + json_num(r.abs_err_est);
        out += ",\"flags\":" + json_escape(flags_to_string(r.flags));
        out += ",\"error\":" + json_escape(r.error);
        out += '}';
    }
    out += "]}";
    return out;
}

std::string to_csv(const ValidationReport& report) {
    // One flat table: a `record` discriminator column, then the union of the
    // per-record fields; cells that do not apply stay empty.
    std::string out =
        "record,name,kind,status,coupling,max_rel_dev,argmax_omega,"
        "corrected_status,max_rel_dev_corrected,cost_ratio,tolerance,location\n";
    auto meta = [&](const std::string& name, const std::string& value) {
        out += "meta," + csv_escape(name) + ",," + csv_escape(value) + ",,,,,,,,\n";
    };
    meta("schema_version", fmt(report.schema_version));
    meta("form_tolerance", fmt(report.form_tolerance));
    meta("grid_points", fmt(report.grid_points));
    meta("grid_omega_min", fmt(report.grid_omega_min));
    meta("grid_omega_max", fmt(report.grid_omega_max));
    for (const FormAudit& f : report.forms) {
        out += "form," + csv_escape(f.name) + ",," + csv_escape(f.status) + ',' +
               fmt(f.coupling) + ',' + fmt(f.max_rel_dev_verbatim) + ',' +
               fmt(f.argmax_omega) + ',' + csv_escape(f.corrected_status) + ',' +
               fmt(f.max_rel_dev_corrected) + ',' + fmt(f.cost_ratio) + ',' +
               fmt(report.form_tolerance) + ",\n";
    }
    for (const IdentityCheck& c : report.identities) {
        out += "identity," + csv_escape(c.name) + ',' + csv_escape(c.kind) + ',' +
               (c.passed ? "pass" : "fail") + ",," + fmt(c.max_rel_dev) +
               ",,,,," + fmt(c.tolerance) + ',' + csv_escape(c.location) + '\n';
    }
    for (const auto& s : report.selections)
        out += "selection," + csv_escape(s.first) + ",," + csv_escape(s.second) + ",,,,,,,,\n";
    for (const auto& c : report.coverage)
        out += "coverage," + csv_escape(c.first) + ",," + (c.second ? "touched" : "missed") +
               ",,,,,,,,\n";
    out += "report,status,," + csv_escape(report.status) + ",,,,,,,,\n";
    out += "report,exit_code,," + fmt(report.exit_code) + ",,,,,,,,\n";
    return out;
}

std::string to_json(const ValidationReport& report) {
    std::string out = "{\"schema_version\":" + fmt(report.schema_version);
    out += ",\"kind\":\"validation\"";
    out += ",\"form_tolerance\":" + json_num(report.form_tolerance);
    out += ",\"grid_points\":" + fmt(report.grid_points);
    out += ",\"grid_omega_min\":" + json_num(report.grid_omega_min);
    out += ",\"grid_omega_max\":" + json_num(report.grid_omega_max);
    out += ",\"forms\":[";
    bool first = true;
    for (const FormAudit& f : report.forms) {
        if (!first) out += ',';
        first = false;
        out += "{\"name\":" + json_escape(f.name);
        out += ",\"coupling\":" + json_num(f.coupling);
        out += ",\"status\":" + json_escape(f.status);
        out += ",\"max_rel_dev_verbatim\":" + json_num(f.max_rel_dev_verbatim);
        out += ",\"argmax_omega\":" + json_num(f.argmax_omega);
        out += ",\"corrected_status\":" + json_escape(f.corrected_status);
        out += ",\"max_rel_dev_corrected\":" + json_num(f.max_rel_dev_corrected);
        out += ",\"cost_ratio\":" + json_num(f.cost_ratio);
        out += '}';
    }
    out += "],\"identities\":[";
    first = true;
    for (const IdentityCheck& c : report.identities) {
        if (!first) out += ',';
        first = false;
        out += "{\"name\":" + json_escape(c.name);
        out += ",\"kind\":" + json_escape(c.kind);
        out += ",\"passed\":";
        out += c.passed ? "true" : "false";
        out += ",\"max_rel_dev\":" + json_num(c.max_rel_dev);
        out += ",\"tolerance\":" + json_num(c.tolerance);
        out += ",\"location\":" + json_escape(c.location);
        out += '}';
    }
    out += "],\"selections\":[";
    first = true;
    for (const auto& s : report.selections) {
        if (!first) out += ',';
        first = false;
        out += "{\"name\":" + json_escape(s.first) + ",\"selected\":" + json_escape(s.second) + '}';
    }
    out += "],\"coverage\":[";
    first = true;
    for (const auto& c : report.coverage) {
        if (!first) out += ',';
        first = false;
        out += "{\"operation\":" + json_escape(c.first) + ",\"touched\":";
        out += c.second ? "true" : "false";
        out += '}';
    }
    out += "],\"status\":" + json_escape(report.status);
    out += ",\"exit_code\":" + fmt(report.exit_code);
    out += '}';
    return out;
}

void write_output(const std::string& path, const std::string& bytes) {
    if (path == "-") {
        if (std::fwrite(bytes.data(), 1, bytes.size(), stdout) != bytes.size())
            fail(errc::io_failure, "short write to stdout");
        std::fflush(stdout);
        return;
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) fail(errc::io_failure, "cannot open '" + path + "' for writing");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    out.flush();
    if (!out) fail(errc::io_failure, "write to '" + path + "' failed");
}

} // namespace ctm
