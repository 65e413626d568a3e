// Command-line front end for the metaharvest pipeline. Links the C API only.

#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "metaharvest.h"

namespace {

struct Options {
    std::string config_path;
    std::string base_url;
    std::string set_spec;
    std::string from;
    std::string until;
    std::string out;
    std::string format = "json";
    double threshold = -1.0;
    int top_k = -1;
    size_t unresolved_top_n = 100;
    std::vector<std::string> overrides; // key=value
};

int fail(mh_session* session, mh_status status) {
    std::fprintf(stderr, "error (%s): %s\n", mh_status_name(status), mh_last_error(session));
    mh_close(session);
    return 2;
}

int finish(mh_session* session, const std::string& stage, const std::string& format) {
    mh_counts counts{};
    mh_last_counts(session, &counts);
    if (format == "csv") {
        std::printf("stage,input,processed,skipped\n%s,%llu,%llu,%llu\n", stage.c_str(),
                    (unsigned long long)counts.input, (unsigned long long)counts.processed,
                    (unsigned long long)counts.skipped);
    } else {
        std::printf("{\"stage\":\"%s\",\"input\":%llu,\"processed\":%llu,\"skipped\":%llu}\n",
                    stage.c_str(), (unsigned long long)counts.input,
                    (unsigned long long)counts.processed, (unsigned long long)counts.skipped);
    }
    int code = counts.skipped > 0 ? 1 : 0;
    mh_close(session);
    return code;
}

mh_session* open_session(const Options& opt, mh_status* status_out) {
    mh_session* session = mh_open(opt.config_path.empty() ? nullptr : opt.config_path.c_str());
    if (!session) {
        *status_out = MH_ERR_INTERNAL;
        return nullptr;
    }
    if (mh_last_error(session)[0] != '\0') {
        *status_out = MH_ERR_CONFIG;
        return session;
    }

    auto set = [&](const char* key, const std::string& value) {
        if (value.empty())
            return MH_OK;
        return mh_set(session, key, value.c_str());
    };
    mh_status st = MH_OK;
    if ((st = set("base_url", opt.base_url)) != MH_OK)
        goto done;
    if (opt.threshold >= 0.0 &&
        (st = mh_set(session, "concentration_threshold", std::to_string(opt.threshold).c_str())) !=
            MH_OK)
        goto done;
    if (opt.top_k >= 0 &&
        (st = mh_set(session, "subtype_top_k", std::to_string(opt.top_k).c_str())) != MH_OK)
        goto done;
    for (const std::string& kv : opt.overrides) {
        size_t eq = kv.find('=');
        if (eq == std::string::npos) {
            st = MH_ERR_INVALID_ARGUMENT;
            goto done;
        }
        st = mh_set(session, kv.substr(0, eq).c_str(), kv.substr(eq + 1).c_str());
        if (st != MH_OK)
            goto done;
    }
done:
    *status_out = st;
    return session;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"metaharvest: OAI-PMH metadata harvesting, cleaning and analytics"};
    app.require_subcommand(1);

    Options opt;
    if (const char* env = std::getenv("METAHARVEST_CONFIG"))
        opt.config_path = env;

    app.add_option("--config", opt.config_path, "Configuration file (key=value lines)")
        ->envname("METAHARVEST_CONFIG");
    app.add_option("--format", opt.format, "Run summary format: csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--option", opt.overrides, "Override a config key, key=value (repeatable)");

    CLI::App* harvest = app.add_subcommand("harvest", "Fetch records over OAI-PMH into raw pages");
    harvest->add_option("--base-url", opt.base_url, "OAI-PMH endpoint");
    harvest->add_option("--set", opt.set_spec, "OAI set to harvest");
    harvest->add_option("--from", opt.from, "Lower UTC datestamp bound (YYYY-MM-DD)");
    harvest->add_option("--until", opt.until, "Upper UTC datestamp bound (YYYY-MM-DD)");

    CLI::App* parse = app.add_subcommand("parse", "Parse harvested pages into the record store");
    CLI::App* clean = app.add_subcommand("clean", "Normalize parsed records");
    CLI::App* resolve = app.add_subcommand("resolve", "Load registries and resolve publishers");
    CLI::App* link = app.add_subcommand("link", "Extract and resolve relation edges");
    CLI::App* report = app.add_subcommand("report", "Write analytics reports");
    report->add_option("--threshold", opt.threshold, "Concentration threshold (fraction)");
    report->add_option("--top-k", opt.top_k, "Subtypes per resource type");
    report->add_option("--out", opt.out, "Report directory override");

    CLI::App* exportu = app.add_subcommand("export-unresolved",
                                           "Export the most frequent unresolved publisher names");
    exportu->add_option("--out", opt.out, "Output CSV path")->required();
    exportu->add_option("--top-n", opt.unresolved_top_n, "How many names to export");

    CLI11_PARSE(app, argc, argv);

    mh_status status = MH_OK;
    mh_session* session = open_session(opt, &status);
    if (!session) {
        std::fprintf(stderr, "error: cannot allocate session\n");
        return 2;
    }
    if (status != MH_OK)
        return fail(session, status);

    if (report->parsed() && !opt.out.empty()) {
        if ((status = mh_set(session, "report_dir", opt.out.c_str())) != MH_OK)
            return fail(session, status);
    }

    if (harvest->parsed()) {
        status = mh_harvest(session, opt.set_spec.empty() ? nullptr : opt.set_spec.c_str(),
                            opt.from.empty() ? nullptr : opt.from.c_str(),
                            opt.until.empty() ? nullptr : opt.until.c_str());
        if (status != MH_OK)
            return fail(session, status);
        return finish(session, "harvest", opt.format);
    }
    if (parse->parsed()) {
        if ((status = mh_parse(session)) != MH_OK)
            return fail(session, status);
        return finish(session, "parse", opt.format);
    }
    if (clean->parsed()) {
        if ((status = mh_clean(session)) != MH_OK)
            return fail(session, status);
        return finish(session, "clean", opt.format);
    }
    if (resolve->parsed()) {
        if ((status = mh_resolve(session)) != MH_OK)
            return fail(session, status);
        return finish(session, "resolve", opt.format);
    }
    if (link->parsed()) {
        if ((status = mh_link(session)) != MH_OK)
            return fail(session, status);
        return finish(session, "link", opt.format);
    }
    if (report->parsed()) {
        if ((status = mh_report(session)) != MH_OK)
            return fail(session, status);
        return finish(session, "report", opt.format);
    }
    if (exportu->parsed()) {
        if ((status = mh_export_unresolved(session, opt.out.c_str(), opt.unresolved_top_n)) !=
            MH_OK)
            return fail(session, status);
        return finish(session, "export-unresolved", opt.format);
    }

    mh_close(session);
    return 2;
}
