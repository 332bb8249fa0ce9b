#pragma once

#include "surropt/config.hpp"
#include "surropt/engine.hpp"

namespace surropt {

// Runs the configured command with the point appended as name=value
// arguments. The command must print "loss=<real> std=<real>" on stdout; a
// nonzero exit, unparsable output, or a timeout yields a failed record.
EvaluationRecord evaluate_external(const ExternalObjectiveConfig& cfg,
                                   const HyperparameterSpace& space,
                                   const HyperparameterSet& point);

EngineObjective make_external_objective(const ExternalObjectiveConfig& cfg,
                                        const HyperparameterSpace& space);

}  // namespace surropt
