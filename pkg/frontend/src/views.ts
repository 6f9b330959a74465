/**
 * Pure view builders: item views in, HTML strings out.
 *
 * Options render in exactly the order the service sent them (the order
 * was randomized and frozen at study construction; reshuffling here
 * would corrupt the hidden keys). The views only ever see rater-safe
 * item fields, so model identities and answer keys cannot leak.
 */

import { ItemView } from "./api.js";

const LIKERT_LABELS: Record<number, string> = {
  1: "Option 1 much better",
  4: "Equal",
  7: "Option 2 much better",
};

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

export function renderAudioPlayer(mediaUrl: string): string {
  return `
  <div class="audio-box">
    <audio id="clip-audio" controls preload="auto" src="${escapeHtml(mediaUrl)}"></audio>
    <div id="media-banner" class="banner hidden">
      Audio unavailable — check your connection and reload.
    </div>
  </div>`;
}

export function renderScreeningQuestion(): string {
  return `
  <fieldset class="screening" id="screening-box">
    <legend>Does this clip contain only music?</legend>
    <label><input type="radio" name="screening" value="yes"> Yes, only music</label>
    <label><input type="radio" name="screening" value="no"> No, it contains other sounds</label>
  </fieldset>`;
}

export function renderLikertScale(): string {
  const buttons = [1, 2, 3, 4, 5, 6, 7].map((v) => {
    const label = LIKERT_LABELS[v] ?? String(v);
    return `<label class="likert-cell">
      <input type="radio" name="likert" value="${v}">
      <span>${v}</span><small>${escapeHtml(label === String(v) ? "" : label)}</small>
    </label>`;
  });
  return `<div class="likert" role="radiogroup">${buttons.join("")}</div>`;
}

export function renderPairwise(item: ItemView, mediaUrl: string): string {
  if (item.kind !== "pairwise_caption") {
    throw new Error(`renderPairwise got a ${item.kind} item`);
  }
  const options = item.options
    .map((text, i) => `
      <section class="option">
        <h3>Option ${i + 1}</h3>
        <p>${escapeHtml(text)}</p>
      </section>`)
    .join("");
  return `
  <div class="item pairwise" data-item-id="${escapeHtml(item.item_id)}">
    ${renderAudioPlayer(mediaUrl)}
    ${item.screening_enabled ? renderScreeningQuestion() : ""}
    <h2>${escapeHtml(item.prompt)}</h2>
    <div class="options">${options}</div>
    ${renderLikertScale()}
    <button id="submit-btn" disabled>Submit</button>
    <p id="notice" class="notice">Play the audio before submitting.</p>
  </div>`;
}

export function renderMatching(item: ItemView, mediaUrl: string): string {
  if (item.kind !== "audio_text_match") {
    throw new Error(`renderMatching got a ${item.kind} item`);
  }
  const options = item.options
    .map((text, i) => `
      <label class="option choice">
        <input type="radio" name="choice" value="${i}">
        <span>${escapeHtml(text)}</span>
      </label>`)
    .join("");
  return `
  <div class="item matching" data-item-id="${escapeHtml(item.item_id)}">
    ${renderAudioPlayer(mediaUrl)}
    <h2>${escapeHtml(item.prompt)}</h2>
    <p>Pick the response that best answers the question for this audio.</p>
    <div class="options">${options}</div>
    <button id="submit-btn" disabled>Submit</button>
    <p id="notice" class="notice">Play the audio before submitting.</p>
  </div>`;
}

export function renderDone(): string {
  return `
  <div class="done">
    <h2>All items rated — thank you!</h2>
    <p>You can close this window.</p>
  </div>`;
}

export function renderItem(item: ItemView, mediaUrl: string): string {
  return item.kind === "audio_text_match"
    ? renderMatching(item, mediaUrl)
    : renderPairwise(item, mediaUrl);
}
