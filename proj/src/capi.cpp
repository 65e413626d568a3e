#include "metaharvest.h"

#include <fstream>
#include <memory>
#include <string>

#include "mh/pipeline.hpp"

struct mh_session {
    mh::cfg::PipelineConfig config;
    std::unique_ptr<mh::log::JsonLogger> logger;
    std::unique_ptr<mh::pipeline::Pipeline> pipeline;
    std::string last_error;
    mh_counts counts{0, 0, 0};

    mh::pipeline::Pipeline& get_pipeline() {
        if (!pipeline) {
            if (!logger)
                logger = std::make_unique<mh::log::JsonLogger>(config.log_path);
            pipeline = std::make_unique<mh::pipeline::Pipeline>(config, *logger);
        }
        return *pipeline;
    }
};

namespace {

mh_status status_from(mh::Errc code) {
    using mh::Errc;
    switch (code) {
    case Errc::config: return MH_ERR_CONFIG;
    case Errc::stage_dependency: return MH_ERR_STAGE_DEPENDENCY;
    case Errc::invalid_request:
    case Errc::invalid_argument:
    case Errc::invalid_range:
    case Errc::empty_input: return MH_ERR_INVALID_ARGUMENT;
    case Errc::protocol: return MH_ERR_PROTOCOL;
    case Errc::transport: return MH_ERR_TRANSPORT;
    case Errc::malformed_response:
    case Errc::malformed_metadata:
    case Errc::malformed_symbol: return MH_ERR_MALFORMED;
    case Errc::storage: return MH_ERR_STORAGE;
    case Errc::missing_registry: return MH_ERR_MISSING_REGISTRY;
    case Errc::io: return MH_ERR_IO;
    }
    return MH_ERR_INTERNAL;
}

template <typename Fn>
mh_status run_stage(mh_session* session, Fn&& fn) {
    if (!session)
        return MH_ERR_INVALID_ARGUMENT;
    session->last_error.clear();
    try {
        mh::pipeline::StageResult result = fn(session->get_pipeline());
        session->counts = {result.input, result.processed, result.skipped};
        return MH_OK;
    } catch (const mh::Error& e) {
        session->last_error = e.what();
        return status_from(e.code());
    } catch (const std::exception& e) {
        session->last_error = e.what();
        return MH_ERR_INTERNAL;
    }
}

std::optional<std::string> opt_arg(const char* s) {
    if (!s || !*s)
        return std::nullopt;
    return std::string(s);
}

} // namespace

extern "C" {

const char* mh_version(void) {
    return "0.1.0";
}

const char* mh_status_name(mh_status status) {
    switch (status) {
    case MH_OK: return "ok";
    case MH_ERR_CONFIG: return "config";
    case MH_ERR_STAGE_DEPENDENCY: return "stage-dependency";
    case MH_ERR_INVALID_ARGUMENT: return "invalid-argument";
    case MH_ERR_PROTOCOL: return "protocol";
    case MH_ERR_TRANSPORT: return "transport";
    case MH_ERR_MALFORMED: return "malformed";
    case MH_ERR_STORAGE: return "storage";
    case MH_ERR_MISSING_REGISTRY: return "missing-registry";
    case MH_ERR_IO: return "io";
    case MH_ERR_INTERNAL: return "internal";
    }
    return "?";
}

mh_session* mh_open(const char* config_path) {
    auto* session = new (std::nothrow) mh_session();
    if (!session)
        return nullptr;
    if (config_path && *config_path) {
        try {
            session->config = mh::cfg::PipelineConfig::from_file(config_path);
        } catch (const std::exception& e) {
            // keep the session so the caller can read the error
            session->last_error = e.what();
        }
    }
    return session;
}

void mh_close(mh_session* session) {
    delete session;
}

const char* mh_last_error(const mh_session* session) {
    if (!session)
        return "null session";
    return session->last_error.c_str();
}

mh_status mh_set(mh_session* session, const char* key, const char* value) {
    if (!session || !key || !value)
        return MH_ERR_INVALID_ARGUMENT;
    session->last_error.clear();
    try {
        session->config.set(key, value);
        if (session->config.raw_dir.empty() && !session->config.store_path.empty())
            session->config.raw_dir = session->config.store_path / "raw";
        if (session->config.report_dir.empty() && !session->config.store_path.empty())
            session->config.report_dir = session->config.store_path / "reports";
        session->pipeline.reset(); // new configuration takes effect lazily
        return MH_OK;
    } catch (const mh::Error& e) {
        session->last_error = e.what();
        return status_from(e.code());
    }
}

void mh_last_counts(const mh_session* session, mh_counts* out) {
    if (!session || !out)
        return;
    *out = session->counts;
}

mh_status mh_harvest(mh_session* session, const char* set_spec, const char* from,
                     const char* until) {
    return run_stage(session, [&](mh::pipeline::Pipeline& p) {
        return p.harvest(opt_arg(set_spec), opt_arg(from), opt_arg(until));
    });
}

mh_status mh_parse(mh_session* session) {
    return run_stage(session, [](mh::pipeline::Pipeline& p) { return p.parse(); });
}

mh_status mh_clean(mh_session* session) {
    return run_stage(session, [](mh::pipeline::Pipeline& p) { return p.clean(); });
}

mh_status mh_resolve(mh_session* session) {
    return run_stage(session, [](mh::pipeline::Pipeline& p) { return p.resolve(); });
}

mh_status mh_link(mh_session* session) {
    return run_stage(session, [](mh::pipeline::Pipeline& p) { return p.link(); });
}

mh_status mh_report(mh_session* session) {
    return run_stage(session, [](mh::pipeline::Pipeline& p) { return p.report(); });
}

mh_status mh_export_unresolved(mh_session* session, const char* out_path, size_t top_n) {
    if (!out_path || !*out_path)
        return MH_ERR_INVALID_ARGUMENT;
    return run_stage(session, [&](mh::pipeline::Pipeline& p) {
        return p.export_unresolved(out_path, top_n);
    });
}

mh_status mh_store_size(mh_session* session, uint64_t* out) {
    if (!session || !out)
        return MH_ERR_INVALID_ARGUMENT;
    session->last_error.clear();
    try {
        *out = session->get_pipeline().store().size();
        return MH_OK;
    } catch (const mh::Error& e) {
        session->last_error = e.what();
        return status_from(e.code());
    }
}

mh_status mh_store_export(mh_session* session, const char* out_path) {
    if (!session || !out_path)
        return MH_ERR_INVALID_ARGUMENT;
    session->last_error.clear();
    try {
        std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
        if (!out)
            throw mh::Error(mh::Errc::io, std::string("cannot write ") + out_path);
        session->get_pipeline().store().export_ndjson(out);
        return MH_OK;
    } catch (const mh::Error& e) {
        session->last_error = e.what();
        return status_from(e.code());
    }
}

mh_status mh_store_import(mh_session* session, const char* in_path) {
    if (!session || !in_path)
        return MH_ERR_INVALID_ARGUMENT;
    session->last_error.clear();
    try {
        std::ifstream in(in_path, std::ios::binary);
        if (!in)
            throw mh::Error(mh::Errc::io, std::string("cannot read ") + in_path);
        uint64_t n = session->get_pipeline().store().import_ndjson(in);
        session->counts = {n, n, 0};
        return MH_OK;
    } catch (const mh::Error& e) {
        session->last_error = e.what();
        return status_from(e.code());
    }
}

} // extern "C"
