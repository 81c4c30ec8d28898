/** Workbench state and transitions.
 *
 * State is immutable; every transition returns a new state. Draft
 * constraints always refer to the current text's tokenization, so editing
 * the text clears them. Translation is explicit (a button), never implicit.
 */

import type { ApiClient } from "./api.js";
import { DraftConstraints, draftToWire, emptyDraft, pinSense, SpanMode, toggleSpan } from "./constraints.js";
import type { TranslateResponse } from "./types.js";

export interface WorkbenchState {
    text: string;
    response: TranslateResponse | null;
    draft: DraftConstraints;
    /** index into the first sentence's alternatives list */
    selectedAlt: number;
    busy: boolean;
    error: string | null;
}

export function initialState(text = ""): WorkbenchState {
    return { text, response: null, draft: emptyDraft(), selectedAlt: 0, busy: false, error: null };
}

export function setText(state: WorkbenchState, text: string): WorkbenchState {
    if (text === state.text) {
        return state;
    }
    return { ...state, text, draft: emptyDraft(), error: null };
}

export function toggleSpanConstraint(
    state: WorkbenchState,
    i: number,
    j: number,
    mode: SpanMode,
    category?: string,
): WorkbenchState {
    return { ...state, draft: toggleSpan(state.draft, i, j, mode, category) };
}

export function setPinnedSense(state: WorkbenchState, tokenIndex: number, senseId: string | null): WorkbenchState {
    return { ...state, draft: pinSense(state.draft, tokenIndex, senseId) };
}

export function selectAlternative(state: WorkbenchState, index: number): WorkbenchState {
    return { ...state, selectedAlt: index };
}

export async function requestTranslation(state: WorkbenchState, api: ApiClient): Promise<WorkbenchState> {
    if (!state.text.trim()) {
        return state;
    }
    const outcome = await api.translate(state.text, draftToWire(state.draft));
    if (!outcome.ok) {
        const message = "error" in outcome.body ? outcome.body.error : `HTTP ${outcome.status}`;
        return { ...state, busy: false, error: message };
    }
    return {
        ...state,
        busy: false,
        error: null,
        selectedAlt: 0,
        response: outcome.body as TranslateResponse,
    };
}
