// Pure editor state. The DOM layer renders whatever is here; everything
// that can be unit-tested without a browser lives in this module.

import type {
  CommitResponse,
  LookaheadResponse,
  ModelResponse,
  RuleCard,
  Suggestion,
} from "./api.js";

export interface CommittedSentence {
  text: string;
  rules: RuleCard[];
}

export interface EditorState {
  sessionId: string | null;
  draft: string[]; // tokens of the sentence being authored
  suggestions: Suggestion[];
  lookaheadDepth: number | null;
  requestSeq: number; // last issued lookahead request
  appliedSeq: number; // last response actually shown
  committed: CommittedSentence[];
  model: ModelResponse;
  banner: string | null; // inline diagnostic, e.g. no continuation
}

export function initialState(): EditorState {
  return {
    sessionId: null,
    draft: [],
    suggestions: [],
    lookaheadDepth: null,
    requestSeq: 0,
    appliedSeq: 0,
    committed: [],
    model: { status: "satisfiable", model: [], violated: [] },
    banner: null,
  };
}

export function draftText(state: EditorState): string {
  return state.draft.join(" ");
}

export function committedText(state: EditorState): string {
  // replayable serialization: committing these lines through the CLI or a
  // fresh session reproduces the same knowledge base
  return state.committed.map((s) => s.text).join("\n");
}

export function beginLookahead(state: EditorState): { state: EditorState; seq: number } {
  const seq = state.requestSeq + 1;
  return { state: { ...state, requestSeq: seq }, seq };
}

export function applyLookahead(
  state: EditorState,
  seq: number,
  response: LookaheadResponse,
): EditorState {
  if (seq <= state.appliedSeq || seq > state.requestSeq) {
    return state; // stale or unknown response: discard
  }
  return {
    ...state,
    appliedSeq: seq,
    suggestions: response.suggestions,
    lookaheadDepth: response.depth_used,
    banner: null,
  };
}

export function applyLookaheadError(state: EditorState, seq: number, message: string): EditorState {
  if (seq <= state.appliedSeq || seq > state.requestSeq) {
    return state;
  }
  return { ...state, appliedSeq: seq, suggestions: [], lookaheadDepth: null, banner: message };
}

export function appendWord(state: EditorState, surface: string): EditorState {
  return { ...state, draft: [...state.draft, surface], banner: null };
}

export function removeLastWord(state: EditorState): EditorState {
  return { ...state, draft: state.draft.slice(0, -1), banner: null };
}

export function applyCommit(state: EditorState, response: CommitResponse): EditorState {
  return {
    ...state,
    draft: [],
    suggestions: [],
    lookaheadDepth: null,
    banner: null,
    committed: [...state.committed, { text: draftText(state), rules: response.rules }],
    model: response.model,
  };
}

export function applyRetract(state: EditorState, model: ModelResponse): EditorState {
  return {
    ...state,
    committed: state.committed.slice(0, -1),
    model,
    banner: null,
  };
}

export interface ChipGroup {
  category: string;
  agreement: string;
  surfaces: string[];
}

export function chipGroups(state: EditorState, typedFragment: string): ChipGroup[] {
  // client-side prefix filter for a partly typed word; the admissible set
  // itself always comes from the service response
  const fragment = typedFragment.toLowerCase();
  const groups: ChipGroup[] = [];
  for (const suggestion of state.suggestions) {
    const surfaces = suggestion.surfaces.filter((s) =>
      fragment === "" ? true : s.toLowerCase().startsWith(fragment),
    );
    if (surfaces.length > 0) {
      groups.push({
        category: suggestion.category,
        agreement: suggestion.agreement,
        surfaces,
      });
    }
  }
  groups.sort((a, b) => a.category.localeCompare(b.category));
  return groups;
}

export function canCommit(state: EditorState): boolean {
  const last = state.draft[state.draft.length - 1];
  return last === "." || last === "?";
}

export function canRetract(state: EditorState): boolean {
  return state.committed.length > 0;
}

export function statusBadge(state: EditorState): "SAT" | "UNSAT" {
  return state.model.status === "satisfiable" ? "SAT" : "UNSAT";
}

export function violatedRuleIds(state: EditorState): Set<number> {
  return new Set(state.model.violated);
}
