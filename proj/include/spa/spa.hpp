#ifndef SPA_SPA_HPP
#define SPA_SPA_HPP

#include "spa/annealer.hpp"
#include "spa/csv.hpp"
#include "spa/error.hpp"
#include "spa/experiments.hpp"
#include "spa/io.hpp"
#include "spa/model.hpp"
#include "spa/objective.hpp"
#include "spa/oracle.hpp"
#include "spa/report.hpp"
#include "spa/rng.hpp"

#endif  // SPA_SPA_HPP
