// deputy — contextual code review engine.
//
// serve            webhook-driven service mode
// review           offline review of a local repository
// analytics report experiment metrics over an ingestion file
// config check     validate a config file
// config defaults  print the generated configuration reference

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "deputy/analytics/metrics.hpp"
#include "deputy/engine/config.hpp"
#include "deputy/engine/pipeline.hpp"
#include "deputy/engine/service.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitReviewErrors = 1;
constexpr int kExitUsage = 2;

deputy::engine::EngineConfig load_or_default(const std::string& path) {
    if (path.empty()) return deputy::engine::default_config();
    return deputy::engine::load_config(path);
}

void log_stages(const deputy::engine::RunReport& run) {
    for (const auto& [stage, ms] : run.stage_ms) {
        std::cerr << "stage " << stage << " " << static_cast<long>(ms) << "ms\n";
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"deputy — contextual code review engine"};
    app.require_subcommand(1);

    std::string config_path;

    auto* serve = app.add_subcommand("serve", "run the webhook service");
    serve->add_option("--config", config_path, "engine config file")->required();

    auto* review = app.add_subcommand("review", "review a local repository");
    std::string repo_path;
    std::string base_ref = "main";
    std::string head_ref = "HEAD";
    bool as_json = false;
    review->add_option("repo", repo_path, "path to a local working tree")->required();
    review->add_option("--base", base_ref, "target (base) ref")->required();
    review->add_option("--head", head_ref, "source (head) ref")->required();
    review->add_flag("--json", as_json, "emit the report as JSON");
    review->add_option("--config", config_path, "engine config file");

    auto* analytics = app.add_subcommand("analytics", "experiment metrics");
    auto* analytics_report = analytics->add_subcommand("report", "report over an ingestion file");
    std::string records_path;
    bool analytics_json = false;
    analytics_report->add_option("file", records_path, "ingestion file (CSV lines)")->required();
    analytics_report->add_flag("--json", analytics_json, "emit machine-readable JSON");

    auto* config_cmd = app.add_subcommand("config", "configuration utilities");
    auto* config_check = config_cmd->add_subcommand("check", "validate a config file");
    std::string check_path;
    config_check->add_option("file", check_path, "config file")->required();
    auto* config_defaults =
        config_cmd->add_subcommand("defaults", "print the configuration reference");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return kExitOk;  // --help
        std::cerr << e.what() << "\n";
        return kExitUsage;
    }

    try {
        if (serve->parsed()) {
            auto config = deputy::engine::load_config(config_path);
            auto engine =
                std::make_shared<deputy::engine::Engine>(deputy::engine::build_engine(config));
            deputy::engine::ServiceOptions options;
            options.port = config.service.port;
            options.workers = config.service.workers;
            options.queue_capacity = config.service.queue_capacity;
            if (const char* secret = std::getenv(config.service.secret_env.c_str())) {
                options.shared_secret = secret;
            }
            deputy::engine::WebhookService service(engine, options);
            service.start();
            std::cerr << "listening on :" << service.port() << " (POST /webhook/{provider})\n";
            // foreground service; terminate with a signal
            while (true) std::this_thread::sleep_for(std::chrono::seconds(3600));
        }

        if (review->parsed()) {
            auto config = load_or_default(config_path);
            auto engine = deputy::engine::build_engine(config);
            auto run = engine.review_local(repo_path, base_ref, head_ref);
            log_stages(run);
            std::cout << (as_json ? deputy::engine::render_run_json(run)
                                  : deputy::engine::render_run_text(run));
            if (as_json) std::cout << "\n";
            using deputy::engine::RunOutcome;
            bool clean = run.outcome == RunOutcome::posted ||
                         run.outcome == RunOutcome::nothing_to_review;
            return clean ? kExitOk : kExitReviewErrors;
        }

        if (analytics_report->parsed()) {
            std::ifstream in(records_path);
            if (!in) {
                std::cerr << "cannot read " << records_path << "\n";
                return kExitUsage;
            }
            auto loaded = deputy::analytics::load_records(in);
            for (const auto& warning : loaded.warnings) std::cerr << warning << "\n";
            auto report = deputy::analytics::build_report(loaded.records);
            std::cout << (analytics_json ? deputy::analytics::render_report_json(report)
                                         : deputy::analytics::render_report_text(report));
            if (analytics_json) std::cout << "\n";
            return kExitOk;
        }

        if (config_check->parsed()) {
            deputy::engine::load_config(check_path);
            std::cout << "config ok\n";
            return kExitOk;
        }

        if (config_defaults->parsed()) {
            std::cout << deputy::engine::config_reference_json() << "\n";
            return kExitOk;
        }
    } catch (const deputy::engine::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitReviewErrors;
    }
    return kExitOk;
}
