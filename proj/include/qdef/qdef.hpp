#pragma once

#include "qdef/classical.hpp"
#include "qdef/commands.hpp"
#include "qdef/config.hpp"
#include "qdef/errors.hpp"
#include "qdef/model.hpp"
#include "qdef/q_calculus.hpp"
#include "qdef/quantum.hpp"
#include "qdef/series_table.hpp"
#include "qdef/special_functions.hpp"
#include "qdef/verify.hpp"
#include "qdef/version.hpp"
