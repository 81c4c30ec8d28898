/** Workbench loop against the live translation service.
 *
 * Spawns `eiwa serve` from the repository root, then drives the state
 * transitions exactly as the page does: translate, pin a sense, mark spans,
 * re-translate, and render.
 */

import assert from "node:assert/strict";
import { spawn, ChildProcess } from "node:child_process";
import { once } from "node:events";
import { fileURLToPath } from "node:url";
import { after, before, test } from "node:test";

import { ApiClient, FetchLike } from "../src/api.js";
import { serializeConstraints } from "../src/constraints.js";
import { renderSentences, renderTree } from "../src/render.js";
import {
    initialState,
    requestTranslation,
    setPinnedSense,
    setText,
    toggleSpanConstraint,
    WorkbenchState,
} from "../src/state.js";
import type { PhraseNode, TranslateResponse } from "../src/types.js";

const REPO_ROOT = fileURLToPath(new URL("../../..", import.meta.url));
const PP_SENTENCE = "The man saw the dog with the telescope.";
const ENGINE_CANONICAL =
    '{"forbidden_spans":[],"pinned_senses":[{"sense_id":"cut","token_index":2}],"required_spans":[[3,8,"np"]]}';

let server: ChildProcess;
let baseUrl = "";
const sentBodies: string[] = [];

const recordingFetch: FetchLike = (input, init) => {
    if (init?.body) {
        sentBodies.push(String(init.body));
    }
    return fetch(input, init);
};

before(async () => {
    server = spawn(
        "python3",
        [
            "-m", "eiwa.cli", "serve",
            "--grammar", "fixtures/grammar.txt",
            "--lexicon", "fixtures/lexicon.txt",
            "--taxonomy", "fixtures/taxonomy.txt",
            "--xforms", "fixtures/xforms.txt",
            "--config", "fixtures/config.txt",
            "--port", "0",
        ],
        {
            cwd: REPO_ROOT,
            env: { ...process.env, PYTHONPATH: `${REPO_ROOT}/src` },
            stdio: ["ignore", "ignore", "pipe"],
        },
    );
    const port = await new Promise<string>((resolve, reject) => {
        let buffered = "";
        server.stderr!.on("data", (chunk: Buffer) => {
            buffered += chunk.toString();
            const match = buffered.match(/serving on http:\/\/[\d.]+:(\d+)/);
            if (match) {
                resolve(match[1]);
            }
        });
        server.on("exit", (code) => reject(new Error(`server exited early: ${code}\n${buffered}`)));
        setTimeout(() => reject(new Error(`server never came up:\n${buffered}`)), 15000).unref();
    });
    baseUrl = `http://127.0.0.1:${port}`;
});

after(async () => {
    server.kill();
    await once(server, "exit").catch(() => undefined);
});

function client(): ApiClient {
    return new ApiClient(baseUrl, recordingFetch);
}

function firstSentence(state: WorkbenchState) {
    assert.ok(state.response, "expected a response");
    return state.response.sentences[0];
}

test("plain translation renders the VP-attachment output", async () => {
    let state = initialState(PP_SENTENCE);
    state = await requestTranslation(state, client());
    const sentence = firstSentence(state);
    assert.equal(sentence.status, "ok");
    assert.equal(sentence.japanese, "男は犬を望遠鏡で見た。");
    assert.equal(sentence.parse_count, "2");
    assert.ok(sentence.alternatives.length >= 2);
    assert.equal(sentence.alternatives[0].japanese, "男は犬を望遠鏡で見た。");
    const html = renderSentences(state.response!.sentences, state.draft, 0);
    assert.ok(html.includes("男は犬を望遠鏡で見た。"));
});

test("pinning saw→cut re-translates to the 切った golden string", async () => {
    let state = initialState(PP_SENTENCE);
    state = await requestTranslation(state, client());
    // the pin dropdown offers exactly the sense ids the service reported
    assert.deepEqual(firstSentence(state).tokens[2].senses, ["cut", "see"]);
    state = setPinnedSense(state, 2, "cut");
    state = await requestTranslation(state, client());
    const sentence = firstSentence(state);
    assert.equal(sentence.japanese, "男は犬を望遠鏡で切った。");
    const html = renderSentences(state.response!.sentences, state.draft, state.selectedAlt);
    assert.ok(html.includes("男は犬を望遠鏡で切った。"));
    assert.ok(sentence.alternatives.every((alt) => alt.signature.includes("cut")));
});

test("requiring span (3,8) flips the displayed tree to NP attachment", async () => {
    let state = initialState(PP_SENTENCE);
    state = await requestTranslation(state, client());
    let tree = firstSentence(state).best!.tree as PhraseNode;
    assert.equal((tree.children[1] as PhraseNode).rule, "r5"); // VP attachment first

    state = toggleSpanConstraint(state, 3, 8, "require", "np");
    state = await requestTranslation(state, client());
    tree = firstSentence(state).best!.tree as PhraseNode;
    assert.equal((tree.children[1] as PhraseNode).rule, "r2"); // now NP attachment
    const np = (tree.children[1] as PhraseNode).children[1] as PhraseNode;
    assert.deepEqual(np.span, [3, 8]);
    assert.ok(renderTree(tree).includes("[3,8)"));
    assert.equal(firstSentence(state).japanese, "男は望遠鏡で犬を見た。");

    // forbidding the same span keeps VP attachment instead
    state = toggleSpanConstraint(state, 3, 8, "require", "np"); // involution: remove
    state = toggleSpanConstraint(state, 3, 8, "forbid");
    state = await requestTranslation(state, client());
    tree = firstSentence(state).best!.tree as PhraseNode;
    assert.equal((tree.children[1] as PhraseNode).rule, "r5");
});

test("the request JSON matches the engine-side constraints schema byte for byte", async () => {
    let state = initialState(PP_SENTENCE);
    state = setPinnedSense(state, 2, "cut");
    state = toggleSpanConstraint(state, 3, 8, "require", "np");
    assert.equal(serializeConstraints(state.draft), ENGINE_CANONICAL);

    sentBodies.length = 0;
    state = await requestTranslation(state, client());
    assert.equal(firstSentence(state).status, "ok");
    assert.equal(sentBodies.length, 1);
    assert.ok(sentBodies[0].includes(`"constraints":${ENGINE_CANONICAL}`));
});

test("service 400s surface as inline errors and keep the old view", async () => {
    let state = initialState("x");
    state = setPinnedSense(state, 0, "nope");
    const previous = state.response;
    state = await requestTranslation(state, client());
    assert.ok(state.error && state.error.includes("unknown sense"));
    assert.equal(state.response, previous);
});

test("the view only shows data present verbatim in the response", async () => {
    let state = initialState(PP_SENTENCE);
    state = await requestTranslation(state, client());
    const response = state.response as TranslateResponse;
    const html = renderSentences(response.sentences, state.draft, 0);
    const sentence = response.sentences[0];
    for (const alt of sentence.alternatives) {
        assert.ok(html.includes(alt.japanese));
        assert.ok(html.includes(String(alt.total)));
    }
    for (const token of sentence.tokens) {
        assert.ok(html.includes(token.surface));
    }
    assert.ok(html.includes(`parses ${sentence.parse_count}`));
});

test("empty text never fires a request", async () => {
    const state = initialState("   ");
    sentBodies.length = 0;
    const next = await requestTranslation(state, client());
    assert.equal(next, state);
    assert.equal(sentBodies.length, 0);
});
