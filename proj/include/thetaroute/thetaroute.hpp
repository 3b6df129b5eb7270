#ifndef THETAROUTE_THETAROUTE_HPP
#define THETAROUTE_THETAROUTE_HPP

#include "thetaroute/analysis.hpp"
#include "thetaroute/geometry.hpp"
#include "thetaroute/graph.hpp"
#include "thetaroute/instances.hpp"
#include "thetaroute/rational.hpp"
#include "thetaroute/report.hpp"
#include "thetaroute/router.hpp"
#include "thetaroute/svg.hpp"

#endif  // THETAROUTE_THETAROUTE_HPP
