#pragma once
#ifndef TRISECANT_HPP
#define TRISECANT_HPP

#include "trisecant/numeric.hpp"
#include "trisecant/random.hpp"
#include "trisecant/linalg.hpp"
#include "trisecant/parallel.hpp"
#include "trisecant/poly.hpp"
#include "trisecant/poly_json.hpp"
#include "trisecant/sturm.hpp"
#include "trisecant/homotopy.hpp"
#include "trisecant/variety.hpp"
#include "trisecant/constructions.hpp"
#include "trisecant/trichotomy.hpp"
#include "trisecant/dual_scan.hpp"

#endif  // TRISECANT_HPP
