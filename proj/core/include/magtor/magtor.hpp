#pragma once

#include "magtor/classical.hpp"
#include "magtor/error.hpp"
#include "magtor/exact.hpp"
#include "magtor/flow.hpp"
#include "magtor/io.hpp"
#include "magtor/lengths.hpp"
#include "magtor/normal_form.hpp"
#include "magtor/spectra.hpp"
#include "magtor/system.hpp"
