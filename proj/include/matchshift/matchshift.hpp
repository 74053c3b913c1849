#pragma once

#include <matchshift/changes.hpp>
#include <matchshift/core.hpp>
#include <matchshift/errors.hpp>
#include <matchshift/experiments.hpp>
#include <matchshift/gale_shapley.hpp>
#include <matchshift/io.hpp>
#include <matchshift/oracle.hpp>
#include <matchshift/reductions.hpp>
#include <matchshift/rng.hpp>
#include <matchshift/rotations.hpp>
#include <matchshift/sampling.hpp>
#include <matchshift/solvers.hpp>
#include <matchshift/stats.hpp>
