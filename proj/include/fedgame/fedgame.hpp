// Copyright 2026 The fedgame Authors
//
//    Licensed under the Apache License, Version 2.0 (the "License");
//    you may not use this file except in compliance with the License.
//    You may obtain a copy of the License at
//
//        http://www.apache.org/licenses/LICENSE-2.0
//
//    Unless required by applicable law or agreed to in writing, software
//    distributed under the License is distributed on an "AS IS" BASIS,
//    WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//    See the License for the specific language governing permissions and
//    limitations under the License.

#pragma once

#include <fedgame/anarchy.hpp>
#include <fedgame/check_report.hpp>
#include <fedgame/coalition_table.hpp>
#include <fedgame/enumeration.hpp>
#include <fedgame/io.hpp>
#include <fedgame/lemma_lab.hpp>
#include <fedgame/model.hpp>
#include <fedgame/montecarlo.hpp>
#include <fedgame/optimal.hpp>
#include <fedgame/rational.hpp>
#include <fedgame/stability.hpp>
