#ifndef CUMULUS_CUMULUS_HPP
#define CUMULUS_CUMULUS_HPP

#include "cumulus/domain.hpp"
#include "cumulus/engine.hpp"
#include "cumulus/model.hpp"
#include "cumulus/oracle.hpp"
#include "cumulus/profile.hpp"
#include "cumulus/psplib.hpp"
#include "cumulus/report.hpp"
#include "cumulus/runner.hpp"
#include "cumulus/timetable.hpp"
#include "cumulus/ttef.hpp"

#endif  // CUMULUS_CUMULUS_HPP
