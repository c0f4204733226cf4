#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "reprosel/cli.hpp"

namespace {

using namespace reprosel::cli;

void add_study_flags(CLI::App& cmd, StudyInputs& study, std::string& thresholds) {
    cmd.add_option("--config", study.config, "Study config JSON")->required()->check(CLI::ExistingFile);
    cmd.add_option("--input", study.inputs, "Weight records (JSONL); repeatable")->required()->check(CLI::ExistingFile);
    cmd.add_flag("--allow-missing", study.allow_missing, "Warn instead of failing on missing (model, view, mode) cells");
    cmd.add_option("--thresholds", thresholds, "Override the config's top-k thresholds, e.g. 5,10,15,20");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Reproducibility matrices, scores and model selection from learned biomarker weights"};
    app.set_version_flag("--version", std::string(kToolVersion));
    app.require_subcommand(1);

    StudyInputs validate_inputs;
    std::string validate_thresholds;
    auto* validate = app.add_subcommand("validate", "Check inputs and report every problem found");
    add_study_flags(*validate, validate_inputs, validate_thresholds);

    RunOptions run_options;
    std::string run_thresholds;
    std::string run_scores;
    auto* run = app.add_subcommand("run", "Full pipeline: matrices, scores, selection and report files");
    auto* scores = app.add_subcommand("scores", "Score table only");
    for (auto* cmd : {run, scores}) {
        add_study_flags(*cmd, run_options.study, run_thresholds);
        cmd->add_option("--out", run_options.out_dir, "Output directory")->required();
        cmd->add_flag("--normalize-overall", run_options.normalize_overall,
                      "Min-max scale both matrices before summing them");
        cmd->add_flag("--signed-ranking", run_options.signed_ranking, "Rank biomarkers by signed weight");
        cmd->add_option("--scores", run_scores, "Scores to export, e.g. v.a,r.c,KL (default: all eight)");
    }

    SelectOptions select_options;
    auto* select = app.add_subcommand("select", "Select a model from precomputed matrix CSVs");
    select
        ->add_option("--input", select_options.matrices,
                     "Overall matrix CSV, or view-average then rank-correlation CSV")
        ->required()
        ->check(CLI::ExistingFile);
    select->add_option("--out", select_options.out_dir, "Output directory")->required();
    select->add_flag("--normalize-overall", select_options.normalize_overall,
                     "Min-max scale both matrices before summing them");

    GenOptions gen_options;
    std::string scenario = "random_independent";
    std::string gen_thresholds = "5,10,15,20";
    auto& spec = gen_options.spec;
    auto* gen = app.add_subcommand("gen", "Write a seeded synthetic study (study.jsonl + config.json)");
    gen->add_option("--out", gen_options.out_dir, "Output directory")->required();
    gen->add_option("--seed", spec.seed, "Generator seed");
    gen->add_option("--scenario", scenario,
                    "random_independent | planted_consensus | identical_models | scaled_copies");
    gen->add_option("--n-r", spec.n_r, "Number of biomarkers");
    gen->add_option("--models", spec.n_models, "Number of models");
    gen->add_option("--views", spec.n_views, "Number of views");
    gen->add_option("--modes", spec.n_modes, "Number of training modes");
    gen->add_option("--runs", spec.runs_per_cell, "Runs per (model, view, mode) cell");
    gen->add_option("--thresholds", gen_thresholds, "Top-k thresholds");
    gen->add_option("--planted-fraction", spec.planted_fraction, "Shared top-K fraction (planted_consensus)");
    gen->add_option("--planted-model", spec.planted_model, "Index of the planted model (planted_consensus)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (!validate_thresholds.empty()) {
            validate_inputs.thresholds = parse_size_list(validate_thresholds);
        }
        if (!run_thresholds.empty()) {
            run_options.study.thresholds = parse_size_list(run_thresholds);
        }
        if (!run_scores.empty()) {
            run_options.scores = parse_score_list(run_scores);
        }
        spec.thresholds = parse_size_list(gen_thresholds);
        const auto parsed = oracle_bench::scenario_from_string(scenario);
        if (!parsed) {
            throw std::invalid_argument("unknown scenario '" + scenario + "'");
        }
        spec.scenario = *parsed;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }

    if (*validate) {
        return cmd_validate(validate_inputs, std::cerr);
    }
    if (*run) {
        return cmd_run(run_options, std::cerr);
    }
    if (*scores) {
        return cmd_scores(run_options, std::cerr);
    }
    if (*select) {
        return cmd_select(select_options, std::cerr);
    }
    return cmd_gen(gen_options, std::cerr);
}
