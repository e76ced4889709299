#pragma once

#include "resynth/apply.hpp"
#include "resynth/care_set.hpp"
#include "resynth/divisors.hpp"
#include "resynth/equiv_func.hpp"
#include "resynth/params.hpp"
#include "resynth/resynthesize.hpp"
#include "resynth/window.hpp"
