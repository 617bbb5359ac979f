#pragma once

#include "nilgenus/constructions.hpp"
#include "nilgenus/errors.hpp"
#include "nilgenus/free_group.hpp"
#include "nilgenus/hom_check.hpp"
#include "nilgenus/homcalc.hpp"
#include "nilgenus/l2betti.hpp"
#include "nilgenus/low_index.hpp"
#include "nilgenus/nilquot.hpp"
#include "nilgenus/normal_subgroups.hpp"
#include "nilgenus/reidemeister_schreier.hpp"
#include "nilgenus/todd_coxeter.hpp"
#include "nilgenus/words.hpp"
#include "nilgenus/zlinalg.hpp"
