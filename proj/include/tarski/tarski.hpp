#pragma once

// Everything at once.
#include "tarski/bsb.hpp"
#include "tarski/cayley.hpp"
#include "tarski/certificate.hpp"
#include "tarski/certificates.hpp"
#include "tarski/error.hpp"
#include "tarski/exact.hpp"
#include "tarski/f2_paradox.hpp"
#include "tarski/fixed_points.hpp"
#include "tarski/independence.hpp"
#include "tarski/orbit.hpp"
#include "tarski/parallel.hpp"
#include "tarski/ray.hpp"
#include "tarski/report.hpp"
#include "tarski/rotation.hpp"
#include "tarski/word.hpp"
