/**
 * Recorded responses from a live session service walking the three-component
 * demo instance (create -> query -> answer yes -> done). The view tests pin
 * every rendered number to one of these fields.
 */

import type { QueryResponse, SessionState } from "../src/api.js";

export const DPI2_TEXT = `DPI dpi2

COMPONENTS
  c1 c2 c3

BEHAVIOR
  c1: A
  c2: !A
  c3: A -> B

OBS
  !B

RATES
  c1: 0.1
  c2: 0.3
  c3: 0.3
`;

export const CREATED_STATE: SessionState = {
    format_version: 1,
    session_id: "s1",
    instance: "dpi2",
    engine: "hs_tree",
    mode: "stateless",
    status: "active",
    leading: [
        { components: ["c1"], probability: 0.376923 },
        { components: ["c2", "c3"], probability: 0.623077 },
    ],
    final: null,
    measurement_count: 0,
    history: [],
    skipped: [],
};

export const QUERY: QueryResponse = {
    format_version: 1,
    session_id: "s1",
    query_id: 1,
    proposition: "A",
    partition: { yes: 1, no: 1, undecided: 0 },
    leading: CREATED_STATE.leading,
    status: "active",
};

export const DONE_STATE: SessionState = {
    format_version: 1,
    session_id: "s1",
    instance: "dpi2",
    engine: "hs_tree",
    mode: "stateless",
    status: "done",
    leading: [{ components: ["c2", "c3"], probability: 1.0 }],
    final: ["c2", "c3"],
    measurement_count: 1,
    history: [{ atom: "A", answer: true }],
    skipped: [],
};

export const TRANSCRIPT =
    '{"engine":"hs_tree","event":"init","instance":"dpi2","leading":[["c1"],' +
    '["c2","c3"]],"mode":"stateless","probabilities":[0.376923,0.623077],' +
    '"status":"active"}\n' +
    '{"atom":"A","event":"query","no":1,"undecided":0,"yes":1}\n' +
    '{"answer":true,"atom":"A","event":"answer"}\n' +
    '{"event":"leading","leading":[["c2","c3"]],"probabilities":[1.0]}\n' +
    '{"event":"done","final":["c2","c3"],"measurements":1}\n';
