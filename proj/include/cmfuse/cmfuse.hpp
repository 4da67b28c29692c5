#pragma once

#include "cmfuse/assignment.hpp"
#include "cmfuse/error.hpp"
#include "cmfuse/integrate.hpp"
#include "cmfuse/model.hpp"
#include "cmfuse/ontology.hpp"
#include "cmfuse/report.hpp"
#include "cmfuse/score.hpp"
#include "cmfuse/simatch.hpp"
#include "cmfuse/term.hpp"
#include "cmfuse/transform.hpp"
#include "cmfuse/union_find.hpp"
