#pragma once

#include "mubex/error.hpp"
#include "mubex/field.hpp"
#include "mubex/matrix.hpp"
#include "mubex/mub.hpp"
#include "mubex/expansion.hpp"
#include "mubex/breidbart.hpp"
#include "mubex/tomography.hpp"
#include "mubex/io.hpp"
