// trb.hpp - umbrella header.

#ifndef TRB_TRB_HPP
#define TRB_TRB_HPP

#include "trb/dataset_io.hpp"
#include "trb/empirical.hpp"
#include "trb/inference.hpp"
#include "trb/interval.hpp"
#include "trb/random_stream.hpp"
#include "trb/ratio.hpp"
#include "trb/resample.hpp"
#include "trb/simlab.hpp"
#include "trb/spectral.hpp"
#include "trb/tie_respecting.hpp"
#include "trb/tiediag.hpp"

#endif  // TRB_TRB_HPP
