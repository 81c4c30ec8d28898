/** DOM wiring for the workbench page.
 *
 * Token chips select spans by click-drag; the mode buttons turn the
 * selection into a require/forbid constraint; pin dropdowns choose senses.
 * Nothing re-translates implicitly: the Translate button drives the loop.
 */

import { ApiClient } from "./api.js";
import { serializeConstraints } from "./constraints.js";
import { renderSentences } from "./render.js";
import {
    initialState,
    requestTranslation,
    selectAlternative,
    setPinnedSense,
    setText,
    toggleSpanConstraint,
    WorkbenchState,
} from "./state.js";

// the engine serves no static files, so the page may be opened from anywhere;
// point it at a service with ?service=http://host:port (CORS is open)
const serviceUrl = new URLSearchParams(location.search).get("service") ?? "http://127.0.0.1:8085";
const api = new ApiClient(serviceUrl);
let state: WorkbenchState = initialState("The man saw the dog with the telescope.");
let dragAnchor: number | null = null;
let selection: [number, number] | null = null;

function $(id: string): HTMLElement {
    const element = document.getElementById(id);
    if (!element) {
        throw new Error(`missing #${id}`);
    }
    return element;
}

function update(next: WorkbenchState): void {
    state = next;
    redraw();
}

function redraw(): void {
    const input = $("text") as HTMLTextAreaElement;
    if (input.value !== state.text) {
        input.value = state.text;
    }
    ($("translate") as HTMLButtonElement).disabled = !state.text.trim() || state.busy;
    $("error").textContent = state.error ?? "";
    $("constraints-json").textContent = serializeConstraints(state.draft);
    const view = $("sentences");
    view.innerHTML = state.response
        ? renderSentences(state.response.sentences, state.draft, state.selectedAlt)
        : '<p class="hint">Translate to inspect tokens, trees, and alternatives.</p>';
    highlightSelection();
}

function highlightSelection(): void {
    document.querySelectorAll<HTMLElement>(".token").forEach((chip) => {
        const index = Number(chip.dataset.index);
        const within = selection !== null && index >= selection[0] && index < selection[1];
        chip.classList.toggle("in-selection", within);
    });
    $("selection-label").textContent = selection ? `tokens [${selection[0]}, ${selection[1]})` : "none";
}

async function translateNow(): Promise<void> {
    update({ ...state, busy: true });
    update(await requestTranslation(state, api));
}

function wire(): void {
    const input = $("text") as HTMLTextAreaElement;
    input.addEventListener("input", () => {
        selection = null;
        update(setText(state, input.value));
    });
    $("translate").addEventListener("click", () => void translateNow());

    for (const [id, mode] of [
        ["require-span", "require"],
        ["forbid-span", "forbid"],
    ] as const) {
        $(id).addEventListener("click", () => {
            if (!selection) {
                return;
            }
            const category = ($("category") as HTMLInputElement).value.trim() || undefined;
            update(toggleSpanConstraint(state, selection[0], selection[1], mode, mode === "require" ? category : undefined));
        });
    }

    const view = $("sentences");
    view.addEventListener("mousedown", (event) => {
        const chip = (event.target as HTMLElement).closest<HTMLElement>(".token");
        if (!chip || (event.target as HTMLElement).tagName === "SELECT") {
            return;
        }
        dragAnchor = Number(chip.dataset.index);
        selection = [dragAnchor, dragAnchor + 1];
        highlightSelection();
    });
    view.addEventListener("mouseover", (event) => {
        if (dragAnchor === null) {
            return;
        }
        const chip = (event.target as HTMLElement).closest<HTMLElement>(".token");
        if (!chip) {
            return;
        }
        const index = Number(chip.dataset.index);
        selection = [Math.min(dragAnchor, index), Math.max(dragAnchor, index) + 1];
        highlightSelection();
    });
    document.addEventListener("mouseup", () => {
        dragAnchor = null;
    });

    view.addEventListener("change", (event) => {
        const select = event.target as HTMLSelectElement;
        if (!select.classList.contains("pin")) {
            return;
        }
        update(setPinnedSense(state, Number(select.dataset.index), select.value || null));
    });
    view.addEventListener("click", (event) => {
        const item = (event.target as HTMLElement).closest<HTMLElement>(".alt");
        if (item) {
            update(selectAlternative(state, Number(item.dataset.alt)));
        }
    });
}

async function showInfo(): Promise<void> {
    try {
        const info = await api.info();
        $("info").textContent =
            `${info.rules} rules · ${info.senses} senses · ${info.sem_nodes} sem nodes · ` +
            `${info.xforms} xforms · bundle ${info.fingerprint.slice(0, 12)}`;
    } catch {
        $("info").textContent = "service unreachable — start it with `eiwa serve`";
    }
}

wire();
redraw();
void showInfo();
