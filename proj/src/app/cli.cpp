//
// Project msbench - Copyright 2026 The msbench Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <algorithm>
#include <ostream>

#include <CLI11.hpp>

#include "msbench/app/commands.h"
#include "msbench/chem/molecule.h"
#include "msbench/protocol/prompt.h"

namespace msbench::app {

CliRequest parse_command_line(int argc, const char *const *argv) {
  CLI::App app { "Benchmark harness for LLM structure elucidation from MS/MS spectra",
                 "msbench" };
  app.set_config("--config", "", "key = value file; command-line flags take precedence");
  app.allow_config_extras(CLI::config_extras_mode::error);
  app.fallthrough();
  app.require_subcommand(1, 1);

  CliRequest req;
  RunConfig &cfg = req.config;
  std::string dataset, template_path, run_dir = cfg.run_dir.string();
  std::string split = "test";
  app.add_option("--dataset", dataset, "Dataset file (.tsv or .jsonl)");
  app.add_option("--template", template_path, "Prompt template (default: built-in)");
  app.add_option("--run-dir", run_dir, "Directory for cache, transcripts and reports")
      ->capture_default_str();
  app.add_option("--model", cfg.provider.model_name, "Model name")->capture_default_str();
  app.add_option("--endpoint", cfg.provider.endpoint_url, "Chat-completions URL")
      ->capture_default_str();
  app.add_option("--provider", cfg.provider_spec, "http, or mock:<dir> to replay transcripts")
      ->capture_default_str();
  app.add_option("--api-key-env", cfg.provider.api_key_env,
                 "Environment variable holding the API key")
      ->capture_default_str();
  app.add_option("--temperature", cfg.provider.temperature)->capture_default_str();
  app.add_option("--max-tokens", cfg.provider.max_tokens)->capture_default_str();
  app.add_option("--timeout", cfg.provider.request_timeout, "Request timeout in seconds")
      ->capture_default_str();
  app.add_option("--max-retries", cfg.provider.max_retries)->capture_default_str();
  app.add_option("--parallelism", cfg.provider.parallelism, "Concurrent requests")
      ->capture_default_str();
  app.add_option("--k", cfg.k, "Candidates scored for top-k metrics")->capture_default_str();
  app.add_option("--mces-budget", cfg.mces_budget, "MCES time budget per pair, seconds")
      ->capture_default_str();
  app.add_option("--split", split, "train, val, test or all")->capture_default_str();
  app.add_option("--threads", cfg.eval_threads, "Scoring threads (0: all cores)")
      ->capture_default_str();

  app.add_subcommand("ingest", "Validate a dataset and print the load report");
  app.add_subcommand("run", "Render prompts and collect completions");
  app.add_subcommand("evaluate", "Score transcripts and write reports");
  app.add_subcommand("report", "evaluate, then print the summary table");
  auto *mces = app.add_subcommand("mces", "MCES between two SMILES");
  mces->add_option("smiles_a", req.smiles_a)->required();
  mces->add_option("smiles_b", req.smiles_b)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success &) {
    req.help_text = app.help();
    return req;
  } catch (const CLI::ParseError &e) {
    throw UsageError(std::string(e.what()) + "\n" + app.help());
  }

  req.command = app.get_subcommands().front()->get_name();
  cfg.dataset_path = dataset;
  cfg.template_path = template_path;
  cfg.run_dir = run_dir;
  if (split == "all") {
    cfg.split.reset();
  } else if (const auto s = data::parse_split(split)) {
    cfg.split = *s;
  } else {
    throw UsageError("unknown split '" + split + "'");
  }
  if (req.command != "mces" && dataset.empty())
    throw UsageError("--dataset is required");
  if (cfg.k < 1)
    throw UsageError("--k must be >= 1");
  return req;
}

int run_cli(int argc, const char *const *argv, std::ostream &out, std::ostream &err) {
  CliRequest req;
  try {
    req = parse_command_line(argc, argv);
  } catch (const UsageError &e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  if (req.command.empty()) {
    out << req.help_text;
    return kExitOk;
  }

  const RunConfig &cfg = req.config;
  try {
    if (req.command == "ingest") {
      cmd_ingest(cfg, out);
    } else if (req.command == "run") {
      const auto outcomes = cmd_run(cfg, out);
      for (const auto &o: outcomes) {
        if (o.status != llm::CompletionStatus::kOk) {
          err << "warning: " << o.record_id << ": " << to_string(o.status)
              << (o.error.empty() ? "" : " (" + o.error + ")") << '\n';
        }
      }
      const bool all_ok = std::all_of(outcomes.begin(), outcomes.end(), [](const auto &o) {
        return o.status == llm::CompletionStatus::kOk;
      });
      return all_ok ? kExitOk : kExitProvider;
    } else if (req.command == "evaluate") {
      cmd_evaluate(cfg, out);
    } else if (req.command == "report") {
      cmd_report(cfg, out);
    } else if (req.command == "mces") {
      cmd_mces(req.smiles_a, req.smiles_b, cfg.mces_budget, out);
    }
  } catch (const data::DatasetError &e) {
    err << "error: " << e.what() << '\n';
    return kExitDataError;
  } catch (const MissingTranscripts &e) {
    err << "error: " << e.what() << '\n';
    return kExitDataError;
  } catch (const eval::EmptyInput &e) {
    err << "error: " << e.what() << '\n';
    return kExitDataError;
  } catch (const chem::ChemError &e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const protocol::TemplateError &e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const llm::ConfigError &e) {
    err << "error: " << e.what() << '\n';
    return kExitProvider;
  } catch (const std::invalid_argument &e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception &e) {
    err << "error: " << e.what() << '\n';
    return kExitDataError;
  }
  return kExitOk;
}

} // namespace msbench::app
