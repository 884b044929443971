/** About page: dataset download plus an inline paginated preview of the CSV. */

import type { ApiClient } from './api.js';
import { parseCsv } from './csv.js';

const ROWS_PER_PAGE = 50;

export class AboutPage {
  private rows: string[][] = [];
  private header: string[] = [];
  private page = 0;

  constructor(
    private readonly root: HTMLElement,
    private readonly api: ApiClient,
  ) {}

  /** Fetches the export body (the same bytes the download link serves). */
  async render(project?: string): Promise<void> {
    this.root.textContent = '';
    this.root.classList.add('about-page');

    const intro = document.createElement('p');
    intro.textContent =
      'The dataset behind every chart. Download it as CSV or browse it inline below.';
    this.root.appendChild(intro);

    const download = document.createElement('a');
    download.className = 'about-download';
    download.href = this.api.exportUrl(project);
    download.setAttribute('download', 'dataset.csv');
    download.textContent = project ? `download ${project}.csv` : 'download dataset.csv';
    this.root.appendChild(download);

    let text: string;
    try {
      text = await this.api.exportCsv(project);
    } catch (error) {
      const failure = document.createElement('div');
      failure.className = 'about-error';
      failure.textContent = `could not load dataset: ${(error as Error).message}`;
      this.root.appendChild(failure);
      return;
    }

    const records = parseCsv(text);
    this.header = records[0] ?? [];
    this.rows = records.slice(1);
    this.page = 0;
    this.renderTable();
  }

  private renderTable(): void {
    const existing = this.root.querySelector('.about-table-wrap');
    existing?.remove();

    const wrap = document.createElement('div');
    wrap.className = 'about-table-wrap';

    const table = document.createElement('table');
    table.className = 'about-table';
    const head = table.createTHead().insertRow();
    for (const column of this.header) {
      const cell = document.createElement('th');
      cell.textContent = column;
      head.appendChild(cell);
    }
    const body = table.createTBody();
    const start = this.page * ROWS_PER_PAGE;
    for (const record of this.rows.slice(start, start + ROWS_PER_PAGE)) {
      const row = body.insertRow();
      for (const value of record) {
        row.insertCell().textContent = value.trimEnd();
      }
    }
    wrap.appendChild(table);

    const pager = document.createElement('div');
    pager.className = 'about-pager';
    const pageCount = Math.max(1, Math.ceil(this.rows.length / ROWS_PER_PAGE));

    const prev = document.createElement('button');
    prev.textContent = 'prev';
    prev.disabled = this.page === 0;
    prev.addEventListener('click', () => {
      this.page -= 1;
      this.renderTable();
    });
    pager.appendChild(prev);

    const label = document.createElement('span');
    label.textContent = ` ${this.rows.length} rows · page ${this.page + 1} / ${pageCount} `;
    pager.appendChild(label);

    const next = document.createElement('button');
    next.textContent = 'next';
    next.disabled = this.page + 1 >= pageCount;
    next.addEventListener('click', () => {
      this.page += 1;
      this.renderTable();
    });
    pager.appendChild(next);
    wrap.appendChild(pager);

    this.root.appendChild(wrap);
  }
}
